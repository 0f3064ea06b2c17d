//! Generators for standard presentations and the exotic cotangent-sphere script.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Crossing, HandleId, NHandle, Nm1Handle, PresentationModel, Sign};
use crate::moves::Move;

/// Half dimension used by every generated presentation (loose moves need n ≥ 3).
pub const SCENARIO_HALF_DIM: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("parameter {name} = {value} is out of range (must be at least {min})")]
    OutOfRange { name: &'static str, value: u64, min: u64 },
}

/// A 1-handle of the base of a cotangent bundle, seen through its (n-1)-handle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphLoop {
    pub reversing: bool,
    /// Whether the local system has monodromy -1 around this loop.
    pub twisted: bool,
}

impl GraphLoop {
    /// The local system induced by the fiber grading: twisted exactly along
    /// orientation-reversing loops.
    pub fn fiber_induced(reversing: bool) -> Self {
        Self { reversing, twisted: reversing }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioSpec {
    CotangentSphere { s: u32 },
    CotangentGraph { loops: Vec<GraphLoop> },
    RationalBall { k: u32 },
    ExoticSphereScript { s: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub model: PresentationModel,
    pub script: Option<Vec<Move>>,
}

fn at_least(name: &'static str, value: u32, min: u32) -> Result<(), ScenarioError> {
    if value < min {
        return Err(ScenarioError::OutOfRange { name, value: value.into(), min: min.into() });
    }
    Ok(())
}

pub fn build_scenario(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    Ok(match spec {
        ScenarioSpec::CotangentSphere { s } => Scenario { model: cotangent_sphere(*s)?, script: None },
        ScenarioSpec::CotangentGraph { loops } => Scenario { model: cotangent_graph(loops), script: None },
        ScenarioSpec::RationalBall { k } => Scenario { model: rational_ball(*k)?, script: None },
        ScenarioSpec::ExoticSphereScript { s } => {
            let (model, script) = exotic_sphere_script(*s)?;
            Scenario { model, script: Some(script) }
        }
    })
}

/// `T*S^n` from a Morse function with `2s-1` index-n and `2s-2` index-(n-1) critical
/// points: `g_j` meets `h_j` positively and `h_{j+1}` negatively.
pub fn cotangent_sphere(s: u32) -> Result<PresentationModel, ScenarioError> {
    at_least("s", s, 1)?;
    let top = 2 * s - 1;
    let n_handles = (1..=top).map(|i| NHandle::new(format!("h{i}"))).collect();
    let nm1_handles = (1..top)
        .map(|j| {
            Nm1Handle::new(
                format!("g{j}"),
                vec![
                    Crossing::new(format!("h{j}"), Sign::Plus),
                    Crossing::new(format!("h{}", j + 1), Sign::Minus),
                ],
            )
        })
        .collect();
    Ok(PresentationModel::new(format!("cotangent_sphere_s{s}"), SCENARIO_HALF_DIM, n_handles, nm1_handles)
        .expect("generated model is valid"))
}

/// One n-handle `h` and one (n-1)-handle per loop of the base. An orientation-preserving
/// loop crosses `h` with opposite signs, a reversing one with equal signs; local signs
/// are `[+1, -1]` on twisted loops and `[+1, +1]` otherwise.
pub fn cotangent_graph(loops: &[GraphLoop]) -> PresentationModel {
    let nm1_handles = loops
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let second = if l.reversing { Sign::Plus } else { Sign::Minus };
            let local = if l.twisted { Sign::Minus } else { Sign::Plus };
            Nm1Handle::new(
                format!("e{}", i + 1),
                vec![Crossing::new("h", Sign::Plus), Crossing::new("h", second)],
            )
            .with_local_signs(vec![Sign::Plus, local])
        })
        .collect();
    PresentationModel::new("cotangent_graph", SCENARIO_HALF_DIM, vec![NHandle::new("h")], nm1_handles)
        .expect("generated model is valid")
}

/// One n-handle `h` whose attaching sphere crosses the belt sphere of `g` `k` times positively.
pub fn rational_ball(k: u32) -> Result<PresentationModel, ScenarioError> {
    at_least("k", k, 1)?;
    let crossings = (0..k).map(|_| Crossing::new("h", Sign::Plus)).collect();
    Ok(PresentationModel::new(
        format!("rational_ball_{k}"),
        SCENARIO_HALF_DIM,
        vec![NHandle::new("h")],
        vec![Nm1Handle::new("g", crossings)],
    )
    .expect("generated model is valid"))
}

/// The exotic presentation of `T*S^n` with parameter `s`, as a script on
/// [`cotangent_sphere`]`(s)`:
///
/// 1. create a loose cancelling pair `(g0, loose)`;
/// 2. slide every `h_i` over `loose`, with `epsilon = +1` for `i ≤ s` and `-1` after;
/// 3. cancel `g_j` against `h_j` for `j = 1..2s-2`, funnelling all crossings of `g0`
///    onto `h_{2s-1}`;
/// 4. Whitney-reduce the `s-1` opposite pairs on `g0` (possible since `h_{2s-1}` is now loose);
/// 5. cancel `g0` against `h_{2s-1}`.
///
/// The survivor is `loose`, with co-core `♮_{i≤s} C_{h_i} ♮_{i>s} C̄_{h_i}` up to the
/// standard disk.
pub fn exotic_sphere_script(s: u32) -> Result<(PresentationModel, Vec<Move>), ScenarioError> {
    at_least("s", s, 1)?;
    let model = cotangent_sphere(s)?;
    let top = 2 * s - 1;
    let loose = HandleId::new("loose");
    let g0 = HandleId::new("g0");
    let h = |i: u32| HandleId::new(format!("h{i}"));

    let mut script = vec![Move::CreatePair { new_nm1_id: g0.clone(), new_n_id: loose.clone(), loose: true }];
    for i in 1..=top {
        let (epsilon, twists) = if i <= s { (Sign::Plus, 1) } else { (Sign::Minus, 2) };
        script.push(Move::Slide { slid: h(i), over: loose.clone(), epsilon, twists });
    }
    for j in 1..top {
        script.push(Move::CancelPair { nm1_id: HandleId::new(format!("g{j}")), n_id: h(j) });
    }
    for k in 0..s.saturating_sub(1) {
        script.push(Move::WhitneyReduce { nm1_id: g0.clone(), position: (s - k) as usize });
    }
    script.push(Move::CancelPair { nm1_id: g0, n_id: h(top) });
    Ok((model, script))
}
