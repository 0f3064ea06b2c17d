//! The degree n-1 → n Morse differential and top cohomology.

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::{cokernel_group, FgAbelianGroup, IntMatrix};
use crate::model::{HandleId, PresentationModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorseError {
    #[error("twisted coefficients requested but (n-1)-handle '{0}' has no local_sign")]
    MissingLocalSign(HandleId),
}

/// The differential with rows indexed by n-handles and columns by (n-1)-handles,
/// both in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseComplexTop {
    pub differential: IntMatrix,
    pub row_index: Vec<HandleId>,
    pub col_index: Vec<HandleId>,
}

impl MorseComplexTop {
    pub fn entry(&self, row: &HandleId, col: &HandleId) -> Option<&BigInt> {
        let i = self.row_index.iter().position(|h| h == row)?;
        let j = self.col_index.iter().position(|h| h == col)?;
        Some(self.differential.get(i, j))
    }
}

/// `entry(y, x)` is the sum over crossings of `Γ_x` naming `y` of the crossing sign,
/// times the local sign when `twisted`.
pub fn differential_matrix(
    m: &PresentationModel,
    twisted: bool,
) -> Result<MorseComplexTop, MorseError> {
    let rows = m.n_handles().len();
    let cols = m.nm1_handles().len();
    let mut d = IntMatrix::zeros(rows, cols);
    for (j, x) in m.nm1_handles().iter().enumerate() {
        if twisted && x.local_sign.is_none() {
            return Err(MorseError::MissingLocalSign(x.id.clone()));
        }
        let mut column = vec![0i64; rows];
        for (k, c) in x.crossings.iter().enumerate() {
            let i = m.n_index(&c.handle).expect("validated model");
            let mut s = c.sign;
            if twisted {
                s = s * x.local_sign_at(k);
            }
            column[i] += s.value();
        }
        for (i, v) in column.into_iter().enumerate() {
            d.set(i, j, v.into());
        }
    }
    Ok(MorseComplexTop {
        differential: d,
        row_index: m.n_handles().iter().map(|h| h.id.clone()).collect(),
        col_index: m.nm1_handles().iter().map(|h| h.id.clone()).collect(),
    })
}

/// `H^n` as the cokernel of the differential, projected from the free group on n-handles.
///
/// Stopped presentations need no special treatment: linking disks of the stop are
/// already n-handles of the model, so this is the relative group.
pub fn top_cohomology(m: &PresentationModel, twisted: bool) -> Result<FgAbelianGroup, MorseError> {
    Ok(cokernel_group(&differential_matrix(m, twisted)?.differential))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Crossing, NHandle, Nm1Handle, Origin, Sign};

    fn single(crossings: &[i64]) -> PresentationModel {
        let cs = crossings
            .iter()
            .map(|&s| Crossing::new("h", Sign::from_i64(s).unwrap()))
            .collect();
        PresentationModel::new("t", 3, vec![NHandle::new("h")], vec![Nm1Handle::new("g", cs)]).unwrap()
    }

    fn factors(g: &FgAbelianGroup) -> Vec<i64> {
        g.nontrivial_factors().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn opposite_crossings_cancel() {
        let d = differential_matrix(&single(&[1, -1]), false).unwrap();
        assert_eq!(d.differential, IntMatrix::from_rows(&[[0]]));
    }

    #[test]
    fn single_crossing_is_one() {
        let d = differential_matrix(&single(&[1]), false).unwrap();
        assert_eq!(d.entry(&"h".into(), &"g".into()), Some(&1.into()));
    }

    #[test]
    fn twist_flips_second_crossing() {
        let mut m = single(&[1, -1]);
        m.nm1_handles_mut()[0].local_sign = Some(vec![Sign::Plus, Sign::Minus]);
        let d = differential_matrix(&m, true).unwrap();
        assert_eq!(d.differential, IntMatrix::from_rows(&[[2]]));
        assert_eq!(factors(&top_cohomology(&m, true).unwrap()), vec![2]);
        assert_eq!(factors(&top_cohomology(&m, false).unwrap()), vec![0]);
    }

    #[test]
    fn twisted_without_local_signs_fails() {
        assert_eq!(
            differential_matrix(&single(&[1]), true),
            Err(MorseError::MissingLocalSign("g".into()))
        );
    }

    #[test]
    fn cohomology_examples() {
        assert!(top_cohomology(&single(&[1]), false).unwrap().is_trivial());
        assert_eq!(factors(&top_cohomology(&single(&[1, 1]), false).unwrap()), vec![2]);

        let stacked = PresentationModel::new(
            "stacked",
            3,
            vec![NHandle::new("h1"), NHandle::new("h2"), NHandle::new("h3")],
            vec![
                Nm1Handle::new("g1", vec![Crossing::new("h1", Sign::Plus), Crossing::new("h2", Sign::Minus)]),
                Nm1Handle::new("g2", vec![Crossing::new("h2", Sign::Plus), Crossing::new("h3", Sign::Minus)]),
            ],
        )
        .unwrap();
        let d = differential_matrix(&stacked, false).unwrap();
        assert_eq!(d.differential, IntMatrix::from_rows(&[[1, 0], [-1, 1], [0, -1]]));
        assert_eq!(factors(&top_cohomology(&stacked, false).unwrap()), vec![0]);
    }

    #[test]
    fn stop_linking_disks_are_plain_generators() {
        // a stop contributes a linking disk crossing the belt sphere once: relative group is 0
        let m = PresentationModel::new(
            "stopped",
            3,
            vec![NHandle::new("h"), NHandle::new("s").with_origin(Origin::StopLinking)],
            vec![Nm1Handle::new("g", vec![Crossing::new("h", Sign::Plus), Crossing::new("s", Sign::Plus)])],
        )
        .unwrap();
        assert_eq!(factors(&top_cohomology(&m, false).unwrap()), vec![0]);
    }
}
