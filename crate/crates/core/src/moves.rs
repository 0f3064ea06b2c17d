//! Weinstein-homotopy moves on a presentation, with co-core tracking.
//!
//! Co-cores are tracked as words in the co-cores of the *initial* presentation
//! (the reference). Handles introduced by [`Move::CreatePair`] bound the unknot, so
//! their co-core is the standard disk: a boundary connected sum with it does not
//! change the isotopy class, and its letters evaluate to zero. Words are never
//! simplified, so the letter count reflects the geometric history.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{subgroup_compare, GroupElement, SubgroupOrder};
use crate::grothendieck::{class_of_word, k0_upper_bound, CocoreWord, K0Bound};
use crate::model::{Crossing, HandleId, NHandle, Nm1Handle, PresentationModel, Sign};
use crate::morse::{differential_matrix, top_cohomology};

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Move {
    /// Slide `slid` over `over`. `epsilon` orients the connected summand; `twists`
    /// (Reidemeister twists used) is recorded but not interpreted.
    Slide {
        slid: HandleId,
        over: HandleId,
        epsilon: Sign,
        #[serde(default)]
        twists: u32,
    },
    CreatePair {
        new_nm1_id: HandleId,
        new_n_id: HandleId,
        #[serde(default, skip_serializing_if = "is_false")]
        loose: bool,
    },
    CancelPair { nm1_id: HandleId, n_id: HandleId },
    WhitneyReduce { nm1_id: HandleId, position: usize },
    Reorient { n_handle_id: HandleId },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Slide { slid, over, epsilon, twists } => {
                write!(f, "slide {slid} over {over} (epsilon {}, twists {twists})", epsilon.symbol())
            }
            Move::CreatePair { new_nm1_id, new_n_id, loose } => {
                write!(f, "create pair ({new_nm1_id}, {new_n_id}{})", if *loose { ", loose" } else { "" })
            }
            Move::CancelPair { nm1_id, n_id } => write!(f, "cancel pair ({nm1_id}, {n_id})"),
            Move::WhitneyReduce { nm1_id, position } => {
                write!(f, "whitney reduce {nm1_id} at {position}")
            }
            Move::Reorient { n_handle_id } => write!(f, "reorient {n_handle_id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("no n-handle with id '{0}'")]
    UnknownNHandle(HandleId),
    #[error("no (n-1)-handle with id '{0}'")]
    UnknownNm1Handle(HandleId),
    #[error("cannot slide '{0}' over itself")]
    SelfSlide(HandleId),
    #[error("id '{0}' is already in use")]
    IdCollision(HandleId),
    #[error("'{nm1}' meets '{n}' geometrically {count} times (algebraically {algebraic}); cancellation needs exactly one")]
    GeometricCountNotOne {
        nm1: HandleId,
        n: HandleId,
        count: usize,
        algebraic: i64,
    },
    #[error("crossings {position} and {} of '{nm1}' are not an adjacent cancelling pair", position + 1)]
    NotAdjacentCancellingPair { nm1: HandleId, position: usize },
    #[error("crossings {position} and {} of '{nm1}' carry different local signs", position + 1)]
    LocalSignMismatch { nm1: HandleId, position: usize },
    #[error("n-handle '{0}' is not loose")]
    NotLoose(HandleId),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {error}")]
pub struct ScriptError {
    pub step: usize,
    pub error: MoveError,
}

/// Where the co-core letter of a handle id lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LetterOrigin {
    /// Index into the reference presentation's n-handles.
    Initial(usize),
    /// Introduced by a created pair; its co-core is the standard disk.
    Created,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedState {
    presentation: PresentationModel,
    cocores: BTreeMap<HandleId, CocoreWord>,
    letters: BTreeMap<HandleId, LetterOrigin>,
    reference: K0Bound,
    journal: Vec<Move>,
}

impl TrackedState {
    pub fn new(m: PresentationModel) -> Self {
        let reference = k0_upper_bound(&m, false).expect("untwisted bound always exists");
        let cocores = m
            .n_handles()
            .iter()
            .map(|h| (h.id.clone(), CocoreWord::singleton(h.id.clone(), Sign::Plus)))
            .collect();
        let letters = m
            .n_handles()
            .iter()
            .enumerate()
            .map(|(i, h)| (h.id.clone(), LetterOrigin::Initial(i)))
            .collect();
        Self {
            presentation: m,
            cocores,
            letters,
            reference,
            journal: Vec::new(),
        }
    }

    pub fn presentation(&self) -> &PresentationModel {
        &self.presentation
    }

    pub fn cocores(&self) -> &BTreeMap<HandleId, CocoreWord> {
        &self.cocores
    }

    pub fn cocore(&self, id: &HandleId) -> Option<&CocoreWord> {
        self.cocores.get(id)
    }

    pub fn journal(&self) -> &[Move] {
        &self.journal
    }

    /// The untwisted K0 bound of the initial presentation, in which words are evaluated.
    pub fn reference(&self) -> &K0Bound {
        &self.reference
    }

    pub fn letter_origin(&self, id: &HandleId) -> Option<LetterOrigin> {
        self.letters.get(id).copied()
    }

    /// `w` with the standard-disk letters of created handles removed.
    pub fn essential_word(&self, w: &CocoreWord) -> CocoreWord {
        w.filtered(|l| matches!(self.letters.get(&l.handle), Some(LetterOrigin::Initial(_))))
    }

    /// Class of a tracked word in the reference bound.
    pub fn class_of(&self, w: &CocoreWord) -> GroupElement {
        class_of_word(&self.essential_word(w), &self.reference).expect("letters come from the reference")
    }

    pub fn cocore_class(&self, id: &HandleId) -> Option<GroupElement> {
        self.cocores.get(id).map(|w| self.class_of(w))
    }

    /// Invariant-factor coordinates of a tracked word's class, reduced modulo torsion orders.
    pub fn reduced_class(&self, w: &CocoreWord) -> Vec<BigInt> {
        self.reference
            .group
            .reduced_coordinates(&self.class_of(w))
            .expect("same ambient")
    }

    /// Plus and minus letters of a word, ignoring standard-disk letters.
    pub fn essential_counts(&self, w: &CocoreWord) -> (usize, usize) {
        let e = self.essential_word(w);
        (e.plus_count(), e.minus_count())
    }

    /// Applies one move, returning any warnings. On error the state is unchanged.
    pub fn apply(&mut self, mv: &Move) -> Result<Vec<String>, MoveError> {
        let warnings = match mv {
            Move::Slide { slid, over, epsilon, .. } => self.slide(slid, over, *epsilon)?,
            Move::CreatePair { new_nm1_id, new_n_id, loose } => {
                self.create_pair(new_nm1_id, new_n_id, *loose)?
            }
            Move::CancelPair { nm1_id, n_id } => self.cancel_pair(nm1_id, n_id)?,
            Move::WhitneyReduce { nm1_id, position } => self.whitney_reduce(nm1_id, *position)?,
            Move::Reorient { n_handle_id } => self.reorient(n_handle_id)?,
        };
        self.journal.push(mv.clone());
        debug_assert!(self.presentation.validate().is_ok());
        Ok(warnings)
    }

    fn require_n(&self, id: &HandleId) -> Result<usize, MoveError> {
        self.presentation
            .n_index(id)
            .ok_or_else(|| MoveError::UnknownNHandle(id.clone()))
    }

    fn require_nm1(&self, id: &HandleId) -> Result<usize, MoveError> {
        self.presentation
            .nm1_index(id)
            .ok_or_else(|| MoveError::UnknownNm1Handle(id.clone()))
    }

    /// The attaching sphere of `slid` becomes its connected sum with a pushoff of `over`.
    /// Every crossing of `over` on a belt sphere is copied as a crossing of `slid` with
    /// sign `-epsilon` times the original (same local sign), placed after the last
    /// crossing of `slid` in that list. Co-cores: `C_over ← C_over ♮ epsilon·C_slid`.
    fn slide(&mut self, slid: &HandleId, over: &HandleId, epsilon: Sign) -> Result<Vec<String>, MoveError> {
        let si = self.require_n(slid)?;
        let oi = self.require_n(over)?;
        if si == oi {
            return Err(MoveError::SelfSlide(slid.clone()));
        }
        for h in self.presentation.nm1_handles_mut() {
            let copies: Vec<(Crossing, Option<Sign>)> = h
                .crossings
                .iter()
                .enumerate()
                .filter(|(_, c)| &c.handle == over)
                .map(|(k, c)| {
                    let local = h.local_sign.as_ref().map(|ls| ls[k]);
                    (Crossing { handle: slid.clone(), sign: -(epsilon * c.sign) }, local)
                })
                .collect();
            if copies.is_empty() {
                continue;
            }
            let at = h
                .crossings
                .iter()
                .rposition(|c| &c.handle == slid)
                .map_or(h.crossings.len(), |p| p + 1);
            let (cs, ls): (Vec<_>, Vec<_>) = copies.into_iter().unzip();
            h.crossings.as_mut_vec().splice(at..at, cs);
            if let Some(local) = h.local_sign.as_mut() {
                local.splice(at..at, ls.into_iter().map(|s| s.expect("aligned local signs")));
            }
        }
        if self.presentation.n_handles()[oi].loose {
            self.presentation.n_handles_mut()[si].loose = true;
        }
        let summand = self.cocores[slid].oriented(epsilon);
        let w = self.cocores.get_mut(over).expect("cocore for every n-handle");
        *w = w.connect(&summand);
        Ok(Vec::new())
    }

    fn create_pair(&mut self, nm1: &HandleId, n: &HandleId, loose: bool) -> Result<Vec<String>, MoveError> {
        if self.letters.contains_key(n) {
            return Err(MoveError::IdCollision(n.clone()));
        }
        if self.presentation.nm1_index(nm1).is_some() {
            return Err(MoveError::IdCollision(nm1.clone()));
        }
        let twisted = self.presentation.has_local_system();
        let mut belt = Nm1Handle::new(nm1.as_str(), vec![Crossing { handle: n.clone(), sign: Sign::Plus }]);
        if twisted {
            belt = belt.with_local_signs(vec![Sign::Plus]);
        }
        self.presentation.n_handles_mut().push(NHandle::new(n.as_str()).loose(loose));
        self.presentation.nm1_handles_mut().push(belt);
        self.letters.insert(n.clone(), LetterOrigin::Created);
        self.cocores.insert(n.clone(), CocoreWord::singleton(n.clone(), Sign::Plus));
        Ok(Vec::new())
    }

    /// Cancels `x` against `y` when `Γ_x` meets `Λ_y` exactly once. Any crossing of `y`
    /// on another belt sphere is rerouted through the remaining crossings of `Γ_x`
    /// (exact elimination on the ±1 pivot).
    fn cancel_pair(&mut self, nm1: &HandleId, n: &HandleId) -> Result<Vec<String>, MoveError> {
        let xi = self.require_nm1(nm1)?;
        let yi = self.require_n(n)?;
        let x = &self.presentation.nm1_handles()[xi];
        let count = x.crossings.geometric(n);
        if count != 1 {
            return Err(MoveError::GeometricCountNotOne {
                nm1: nm1.clone(),
                n: n.clone(),
                count,
                algebraic: x.crossings.algebraic(n),
            });
        }
        let pivot = x.crossings.iter().position(|c| &c.handle == n).expect("counted once");
        let tau = x.crossings.as_slice()[pivot].sign;
        let lambda = x.local_sign_at(pivot);
        let others: Vec<(Crossing, Sign)> = x
            .crossings
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != pivot)
            .map(|(k, c)| (c.clone(), x.local_sign_at(k)))
            .collect();

        let mut rerouted = 0usize;
        for (j, h) in self.presentation.nm1_handles_mut().iter_mut().enumerate() {
            if j == xi || h.crossings.geometric(n) == 0 {
                continue;
            }
            let old_local = h.local_sign.clone();
            let mut cs = Vec::new();
            let mut ls = Vec::new();
            for (k, c) in h.crossings.iter().enumerate() {
                let kappa = old_local.as_ref().map_or(Sign::Plus, |l| l[k]);
                if &c.handle == n {
                    rerouted += 1;
                    for (z, mu) in &others {
                        cs.push(Crossing { handle: z.handle.clone(), sign: -(z.sign * tau * c.sign) });
                        ls.push(*mu * lambda * kappa);
                    }
                } else {
                    cs.push(c.clone());
                    ls.push(kappa);
                }
            }
            *h.crossings.as_mut_vec() = cs;
            if h.local_sign.is_some() {
                h.local_sign = Some(ls);
            }
        }
        self.presentation.nm1_handles_mut().remove(xi);
        self.presentation.n_handles_mut().remove(yi);
        self.cocores.remove(n);

        let mut warnings = Vec::new();
        if rerouted > 0 {
            warnings.push(format!(
                "{rerouted} crossing(s) of '{n}' on other belt spheres were rerouted through '{nm1}'; \
                 the resulting crossing order is a model choice, only algebraic counts are exact"
            ));
        }
        Ok(warnings)
    }

    fn whitney_reduce(&mut self, nm1: &HandleId, position: usize) -> Result<Vec<String>, MoveError> {
        let xi = self.require_nm1(nm1)?;
        let x = &self.presentation.nm1_handles()[xi];
        let not_pair = || MoveError::NotAdjacentCancellingPair { nm1: nm1.clone(), position };
        let cs = x.crossings.as_slice();
        if position + 1 >= cs.len() {
            return Err(not_pair());
        }
        let (a, b) = (&cs[position], &cs[position + 1]);
        if a.handle != b.handle || a.sign == b.sign {
            return Err(not_pair());
        }
        if x.local_sign_at(position) != x.local_sign_at(position + 1) {
            return Err(MoveError::LocalSignMismatch { nm1: nm1.clone(), position });
        }
        let target = a.handle.clone();
        let n_handle = self.presentation.n_handle(&target).expect("validated reference");
        if !n_handle.loose {
            return Err(MoveError::NotLoose(target));
        }
        let h = &mut self.presentation.nm1_handles_mut()[xi];
        h.crossings.as_mut_vec().drain(position..position + 2);
        if let Some(ls) = h.local_sign.as_mut() {
            ls.drain(position..position + 2);
        }
        let mut warnings = Vec::new();
        if self.presentation.half_dim() < 3 {
            warnings.push(format!(
                "n = {}: loose Legendrians need n ≥ 3, so this reduction is not licensed geometrically",
                self.presentation.half_dim()
            ));
        }
        Ok(warnings)
    }

    fn reorient(&mut self, id: &HandleId) -> Result<Vec<String>, MoveError> {
        self.require_n(id)?;
        self.presentation
            .reorient(id)
            .map_err(|_| MoveError::UnknownNHandle(id.clone()))?;
        let w = self.cocores.get_mut(id).expect("cocore for every n-handle");
        *w = w.reversed();
        Ok(Vec::new())
    }

    /// Checks that the tracked co-cores still present the reference bound: same invariant
    /// factors, every relation of the current presentation holds among the tracked
    /// classes, and the tracked classes generate.
    pub fn verify(&self) -> Result<(), MoveError> {
        let current = top_cohomology(&self.presentation, false).expect("untwisted");
        let reference = &self.reference.group;
        if current.nontrivial_factors() != reference.nontrivial_factors() {
            return Err(MoveError::InvariantViolation(format!(
                "H^n changed from {reference} to {current}"
            )));
        }
        let ids: Vec<HandleId> = self.presentation.n_handles().iter().map(|h| h.id.clone()).collect();
        if ids.len() != self.cocores.len() || ids.iter().any(|id| !self.cocores.contains_key(id)) {
            return Err(MoveError::InvariantViolation("co-core keys differ from n-handles".into()));
        }
        let classes: Vec<GroupElement> = ids.iter().map(|id| self.class_of(&self.cocores[id])).collect();
        let d = differential_matrix(&self.presentation, false).expect("untwisted").differential;
        for (j, x) in self.presentation.nm1_handles().iter().enumerate() {
            let mut sum = GroupElement::zero(self.reference.handles.len());
            for (i, c) in classes.iter().enumerate() {
                let coeff = d.get(i, j);
                if !coeff.is_zero() {
                    sum.add_scaled(c, coeff);
                }
            }
            if !reference.is_zero_element(&sum).expect("same ambient") {
                return Err(MoveError::InvariantViolation(format!(
                    "relation of '{}' fails on tracked co-core classes",
                    x.id
                )));
            }
        }
        let all: Vec<GroupElement> = (0..self.reference.handles.len()).map(|i| reference.generator(i)).collect();
        if subgroup_compare(reference, &classes, &all).expect("same ambient") != SubgroupOrder::Equal {
            return Err(MoveError::InvariantViolation("tracked co-cores no longer generate".into()));
        }
        Ok(())
    }
}

/// Runs `script` from `m`, checking the invariants after every step. The first illegal
/// move aborts with its (0-based) step index.
pub fn run_script(m: &PresentationModel, script: &[Move]) -> Result<TrackedState, ScriptError> {
    let mut state = TrackedState::new(m.clone());
    for (step, mv) in script.iter().enumerate() {
        state.apply(mv).map_err(|error| ScriptError { step, error })?;
        state.verify().map_err(|error| ScriptError { step, error })?;
    }
    Ok(state)
}

/// Replays a journal without the per-step checks.
pub fn replay(m: &PresentationModel, journal: &[Move]) -> Result<TrackedState, ScriptError> {
    let mut state = TrackedState::new(m.clone());
    for (step, mv) in journal.iter().enumerate() {
        state.apply(mv).map_err(|error| ScriptError { step, error })?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::differential_matrix;
    use crate::scenarios::{cotangent_sphere, exotic_sphere_script};

    fn id(s: &str) -> HandleId {
        HandleId::new(s)
    }

    fn slide(slid: &str, over: &str, epsilon: Sign) -> Move {
        Move::Slide { slid: id(slid), over: id(over), epsilon, twists: 1 }
    }

    fn two_handles() -> PresentationModel {
        PresentationModel::new(
            "two",
            3,
            vec![NHandle::new("a"), NHandle::new("b").loose(true)],
            vec![
                Nm1Handle::new("g", vec![Crossing::new("a", Sign::Plus), Crossing::new("b", Sign::Plus)]),
                Nm1Handle::new("k", vec![Crossing::new("b", Sign::Minus), Crossing::new("b", Sign::Minus)]),
            ],
        )
        .unwrap()
    }

    fn matrix(m: &PresentationModel) -> crate::abelian::IntMatrix {
        differential_matrix(m, false).unwrap().differential
    }

    #[test]
    fn slide_row_operation_and_cocores() {
        for eps in [Sign::Plus, Sign::Minus] {
            let m = two_handles();
            let before = matrix(&m);
            let mut s = TrackedState::new(m);
            s.apply(&slide("a", "b", eps)).unwrap();
            let after = matrix(s.presentation());
            for j in 0..2 {
                let expected = before.get(0, j) - before.get(1, j) * eps.value();
                assert_eq!(after.get(0, j), &expected);
                assert_eq!(after.get(1, j), before.get(1, j));
            }
            assert_eq!(s.cocore(&id("a")).unwrap().to_string(), "+a");
            let expected = if eps == Sign::Plus { "+b +a" } else { "+b -a" };
            assert_eq!(s.cocore(&id("b")).unwrap().to_string(), expected);
            assert!(s.presentation().n_handle(&id("a")).unwrap().loose);
            s.verify().unwrap();
        }
    }

    #[test]
    fn slide_splice_is_contiguous_after_last_slid_crossing() {
        let mut s = TrackedState::new(two_handles());
        s.apply(&slide("a", "b", Sign::Plus)).unwrap();
        let g = s.presentation().nm1_handle(&id("g")).unwrap();
        let got: Vec<_> = g.crossings.iter().map(|c| (c.handle.to_string(), c.sign)).collect();
        assert_eq!(
            got,
            vec![("a".into(), Sign::Plus), ("a".into(), Sign::Minus), ("b".into(), Sign::Plus)]
        );
        let k = s.presentation().nm1_handle(&id("k")).unwrap();
        assert_eq!(k.crossings.len(), 4);
        assert_eq!(k.crossings.as_slice()[2], Crossing::new("a", Sign::Plus));
    }

    #[test]
    fn slide_over_handle_without_crossings_only_changes_cocores() {
        let m = PresentationModel::new(
            "p",
            3,
            vec![NHandle::new("a"), NHandle::new("b")],
            vec![Nm1Handle::new("g", vec![Crossing::new("a", Sign::Plus)])],
        )
        .unwrap();
        let mut s = TrackedState::new(m.clone());
        s.apply(&slide("a", "b", Sign::Plus)).unwrap();
        assert_eq!(s.presentation(), &m);
        assert_eq!(s.cocore(&id("b")).unwrap().to_string(), "+b +a");
    }

    #[test]
    fn slide_errors() {
        let mut s = TrackedState::new(two_handles());
        assert_eq!(s.apply(&slide("a", "a", Sign::Plus)), Err(MoveError::SelfSlide(id("a"))));
        assert_eq!(s.apply(&slide("a", "z", Sign::Plus)), Err(MoveError::UnknownNHandle(id("z"))));
        assert!(s.journal().is_empty());
    }

    #[test]
    fn create_then_cancel_returns_to_empty() {
        let mut s = TrackedState::new(PresentationModel::empty("e", 3));
        s.apply(&Move::CreatePair { new_nm1_id: id("g"), new_n_id: id("h"), loose: false }).unwrap();
        assert_eq!(s.presentation().n_handles().len(), 1);
        s.verify().unwrap();
        assert_eq!(
            s.apply(&Move::CreatePair { new_nm1_id: id("g2"), new_n_id: id("h"), loose: false }),
            Err(MoveError::IdCollision(id("h")))
        );
        let w = s.apply(&Move::CancelPair { nm1_id: id("g"), n_id: id("h") }).unwrap();
        assert!(w.is_empty());
        assert!(s.presentation().n_handles().is_empty() && s.presentation().nm1_handles().is_empty());
        assert!(s.cocores().is_empty());
        assert_eq!(
            s.apply(&Move::CreatePair { new_nm1_id: id("g"), new_n_id: id("h"), loose: false }),
            Err(MoveError::IdCollision(id("h"))),
            "historical ids stay reserved"
        );
    }

    #[test]
    fn cancel_requires_geometric_count_one() {
        let m = PresentationModel::new(
            "p",
            3,
            vec![NHandle::new("h")],
            vec![Nm1Handle::new(
                "g",
                vec![Crossing::new("h", Sign::Plus), Crossing::new("h", Sign::Plus), Crossing::new("h", Sign::Minus)],
            )],
        )
        .unwrap();
        let mut s = TrackedState::new(m);
        assert_eq!(
            s.apply(&Move::CancelPair { nm1_id: id("g"), n_id: id("h") }),
            Err(MoveError::GeometricCountNotOne { nm1: id("g"), n: id("h"), count: 3, algebraic: 1 })
        );
    }

    #[test]
    fn cancel_reroutes_crossings_and_keeps_local_system() {
        let m = PresentationModel::new(
            "p",
            3,
            vec![NHandle::new("y"), NHandle::new("z")],
            vec![
                Nm1Handle::new("x", vec![Crossing::new("y", Sign::Minus), Crossing::new("z", Sign::Plus)])
                    .with_local_signs(vec![Sign::Plus, Sign::Minus]),
                Nm1Handle::new("w", vec![Crossing::new("y", Sign::Plus), Crossing::new("z", Sign::Plus)])
                    .with_local_signs(vec![Sign::Minus, Sign::Plus]),
            ],
        )
        .unwrap();
        let untwisted = top_cohomology(&m, false).unwrap().nontrivial_factors();
        let twisted = top_cohomology(&m, true).unwrap().nontrivial_factors();
        let mut s = TrackedState::new(m);
        let warnings = s.apply(&Move::CancelPair { nm1_id: id("x"), n_id: id("y") }).unwrap();
        assert_eq!(warnings.len(), 1);
        let w = s.presentation().nm1_handle(&id("w")).unwrap();
        assert_eq!(w.crossings.as_slice(), &[Crossing::new("z", Sign::Plus), Crossing::new("z", Sign::Plus)]);
        assert_eq!(w.local_sign.as_deref(), Some(&[Sign::Plus, Sign::Plus][..]));
        assert_eq!(top_cohomology(s.presentation(), false).unwrap().nontrivial_factors(), untwisted);
        assert_eq!(top_cohomology(s.presentation(), true).unwrap().nontrivial_factors(), twisted);
        s.verify().unwrap();
    }

    #[test]
    fn whitney_reduce_examples() {
        let build = |loose: bool| {
            PresentationModel::new(
                "p",
                3,
                vec![NHandle::new("h").loose(loose), NHandle::new("g")],
                vec![Nm1Handle::new(
                    "x",
                    vec![Crossing::new("h", Sign::Plus), Crossing::new("h", Sign::Minus), Crossing::new("g", Sign::Plus)],
                )],
            )
            .unwrap()
        };
        let mut s = TrackedState::new(build(true));
        s.apply(&Move::WhitneyReduce { nm1_id: id("x"), position: 0 }).unwrap();
        assert_eq!(
            s.presentation().nm1_handle(&id("x")).unwrap().crossings.as_slice(),
            &[Crossing::new("g", Sign::Plus)]
        );
        let mut s = TrackedState::new(build(false));
        assert_eq!(
            s.apply(&Move::WhitneyReduce { nm1_id: id("x"), position: 0 }),
            Err(MoveError::NotLoose(id("h")))
        );
        let mut s = TrackedState::new(build(true));
        assert!(matches!(
            s.apply(&Move::WhitneyReduce { nm1_id: id("x"), position: 1 }),
            Err(MoveError::NotAdjacentCancellingPair { .. })
        ));
        assert!(matches!(
            s.apply(&Move::WhitneyReduce { nm1_id: id("x"), position: 2 }),
            Err(MoveError::NotAdjacentCancellingPair { .. })
        ));
    }

    #[test]
    fn whitney_in_dimension_two_warns() {
        let m = PresentationModel::new(
            "p",
            2,
            vec![NHandle::new("h").loose(true)],
            vec![Nm1Handle::new("x", vec![Crossing::new("h", Sign::Plus), Crossing::new("h", Sign::Minus)])],
        )
        .unwrap();
        let mut s = TrackedState::new(m);
        let w = s.apply(&Move::WhitneyReduce { nm1_id: id("x"), position: 0 }).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn reorient_flips_signs_and_word() {
        let mut s = TrackedState::new(two_handles());
        s.apply(&slide("a", "b", Sign::Plus)).unwrap();
        s.apply(&Move::Reorient { n_handle_id: id("b") }).unwrap();
        assert_eq!(s.cocore(&id("b")).unwrap().to_string(), "-b -a");
        assert_eq!(s.presentation().n_handle(&id("b")).unwrap().orientation, Sign::Minus);
        s.verify().unwrap();
    }

    #[test]
    fn exotic_script_s2() {
        let (m, script) = exotic_sphere_script(2).unwrap();
        let s = run_script(&m, &script).unwrap();
        assert_eq!(s.presentation().n_handles().len(), 1);
        assert!(s.presentation().nm1_handles().is_empty());
        let (hid, word) = s.cocores().iter().next().unwrap();
        assert_eq!(s.essential_word(word).to_string(), "+h1 +h2 -h3");
        assert_eq!(s.essential_counts(word), (2, 1));
        assert_eq!(s.reduced_class(word), vec![BigInt::from(1)]);
        assert_eq!(s.cocore_class(hid).unwrap(), s.class_of(word));
    }

    #[test]
    fn replay_is_deterministic() {
        let (m, script) = exotic_sphere_script(3).unwrap();
        let a = run_script(&m, &script).unwrap();
        let b = replay(&m, a.journal()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn script_reports_failing_step() {
        let m = cotangent_sphere(2).unwrap();
        let script = vec![
            slide("h1", "h2", Sign::Plus),
            Move::CancelPair { nm1_id: id("g1"), n_id: id("h1") },
        ];
        let err = run_script(&m, &script).unwrap_err();
        assert_eq!(err.step, 1);
        assert!(matches!(err.error, MoveError::GeometricCountNotOne { count: 2, .. }));
    }

    #[test]
    fn move_json_round_trip() {
        let script = vec![
            slide("a", "b", Sign::Minus),
            Move::CreatePair { new_nm1_id: id("g"), new_n_id: id("h"), loose: true },
            Move::CancelPair { nm1_id: id("g"), n_id: id("h") },
            Move::WhitneyReduce { nm1_id: id("g"), position: 3 },
            Move::Reorient { n_handle_id: id("h") },
        ];
        let json = serde_json::to_string(&script).unwrap();
        assert!(json.contains(r#""kind":"slide""#));
        let back: Vec<Move> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, script);
        assert!(serde_json::from_str::<Move>(r#"{"kind":"slide","slid":"a","over":"b","epsilon":2}"#).is_err());
    }
}
