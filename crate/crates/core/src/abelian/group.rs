use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{smith_normal_form, AbelianError, IntMatrix};

/// A finitely generated abelian group presented as the cokernel of an integer
/// matrix whose rows index the generators of a free ambient group.
///
/// `invariant_factors` has one entry per ambient generator: the Smith diagonal of
/// the relations, padded with `0` (a copy of `Z`). `projection` is the unimodular
/// change of basis from ambient to invariant-factor coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FgAbelianGroup {
    ambient_rank: usize,
    relation_matrix: IntMatrix,
    invariant_factors: Vec<BigInt>,
    projection: IntMatrix,
}

/// An element given by coordinates in the free ambient group of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    coordinates: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(coordinates: Vec<BigInt>) -> Self {
        Self { coordinates }
    }

    pub fn from_i64(coordinates: &[i64]) -> Self {
        Self::new(coordinates.iter().map(|&x| x.into()).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![BigInt::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut e = Self::zero(rank);
        e.coordinates[i] = BigInt::one();
        e
    }

    pub fn coordinates(&self) -> &[BigInt] {
        &self.coordinates
    }

    pub fn rank(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }

    /// `self += factor * other`; both must have the same rank.
    pub fn add_scaled(&mut self, other: &GroupElement, factor: &BigInt) {
        assert_eq!(self.rank(), other.rank());
        for (a, b) in self.coordinates.iter_mut().zip(&other.coordinates) {
            *a += factor * b;
        }
    }
}

/// Containment relation between two generated subgroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupOrder {
    Equal,
    AInB,
    BInA,
    Incomparable,
}

/// The cokernel `Z^rows / im(relations)`.
pub fn cokernel_group(relations: &IntMatrix) -> FgAbelianGroup {
    let snf = smith_normal_form(relations);
    let n = relations.rows();
    let diag = snf.d.diagonal();
    let invariant_factors = (0..n)
        .map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero))
        .collect();
    FgAbelianGroup {
        ambient_rank: n,
        relation_matrix: relations.clone(),
        invariant_factors,
        projection: snf.u,
    }
}

impl FgAbelianGroup {
    /// `⊕ Z/f_i`, with `0` standing for `Z`. The factors need not form a divisibility chain.
    pub fn from_cyclic_factors(factors: &[BigInt]) -> Self {
        let mut rel = IntMatrix::zeros(factors.len(), factors.len());
        for (i, f) in factors.iter().enumerate() {
            rel.set(i, i, f.clone());
        }
        cokernel_group(&rel)
    }

    pub fn trivial() -> Self {
        cokernel_group(&IntMatrix::zeros(0, 0))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    /// Invariant factors other than 1, i.e. the cyclic summands that are actually present.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|f| f.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|f| !f.is_zero() && !f.is_one())
            .cloned()
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.iter().all(One::is_one)
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        let nt = self.nontrivial_factors();
        nt.len() == 1 && nt[0].is_zero()
    }

    /// Order of the group, or `None` when it is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.invariant_factors
            .iter()
            .try_fold(BigInt::one(), |acc, f| (!f.is_zero()).then(|| acc * f))
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::basis(self.ambient_rank, i)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.ambient_rank)
    }

    fn check(&self, x: &GroupElement) -> Result<(), AbelianError> {
        if x.rank() != self.ambient_rank {
            return Err(AbelianError::WrongAmbient {
                expected: self.ambient_rank,
                found: x.rank(),
            });
        }
        Ok(())
    }

    /// Canonical invariant-factor coordinates: entry `i` reduced into `[0, f_i)` when
    /// `f_i > 0`, left as is for a `Z` factor. Equal elements have equal coordinates.
    pub fn invariant_coordinates(&self, x: &GroupElement) -> Result<Vec<BigInt>, AbelianError> {
        self.check(x)?;
        let y = self.projection.mul_vec(x.coordinates())?;
        Ok(y.into_iter()
            .zip(&self.invariant_factors)
            .map(|(c, f)| if f.is_zero() { c } else { c.mod_floor(f) })
            .collect())
    }

    /// Coordinates on the nontrivial summands only (those listed by [`Self::nontrivial_factors`]).
    pub fn reduced_coordinates(&self, x: &GroupElement) -> Result<Vec<BigInt>, AbelianError> {
        Ok(self
            .invariant_coordinates(x)?
            .into_iter()
            .zip(&self.invariant_factors)
            .filter(|(_, f)| !f.is_one())
            .map(|(c, _)| c)
            .collect())
    }

    pub fn is_zero_element(&self, x: &GroupElement) -> Result<bool, AbelianError> {
        Ok(self.invariant_coordinates(x)?.iter().all(Zero::is_zero))
    }

    pub fn elements_equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool, AbelianError> {
        Ok(self.invariant_coordinates(a)? == self.invariant_coordinates(b)?)
    }

    /// `G / <gens>`, presented on the same ambient group.
    pub fn quotient_by(&self, gens: &[GroupElement]) -> Result<FgAbelianGroup, AbelianError> {
        let mut columns = self.relation_matrix.columns();
        for g in gens {
            self.check(g)?;
            columns.push(g.coordinates().to_vec());
        }
        Ok(cokernel_group(&IntMatrix::from_columns(self.ambient_rank, &columns)?))
    }

    /// Whether `x` lies in the subgroup generated by `gens`.
    pub fn contains(&self, gens: &[GroupElement], x: &GroupElement) -> Result<bool, AbelianError> {
        self.check(x)?;
        self.quotient_by(gens)?.is_zero_element(x)
    }

    /// Renders an element on the nontrivial summands, e.g. `3`, `2 mod 3`, `(1 mod 2, 3)`.
    pub fn format_element(&self, x: &GroupElement) -> Result<String, AbelianError> {
        let coords = self.reduced_coordinates(x)?;
        let parts: Vec<String> = coords
            .iter()
            .zip(self.nontrivial_factors())
            .map(|(c, f)| if f.is_zero() { c.to_string() } else { format!("{c} mod {f}") })
            .collect();
        Ok(match parts.len() {
            0 => "0".to_string(),
            1 => parts.into_iter().next().unwrap(),
            _ => format!("({})", parts.join(", ")),
        })
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nontrivial_factors()
            .iter()
            .map(|x| if x.is_zero() { "Z".to_string() } else { format!("Z/{x}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Decides containment between `<gens_a>` and `<gens_b>` inside `g`.
pub fn subgroup_compare(
    g: &FgAbelianGroup,
    gens_a: &[GroupElement],
    gens_b: &[GroupElement],
) -> Result<SubgroupOrder, AbelianError> {
    let in_span = |gens: &[GroupElement], xs: &[GroupElement]| -> Result<bool, AbelianError> {
        let q = g.quotient_by(gens)?;
        for x in xs {
            if !q.is_zero_element(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let a_in_b = in_span(gens_b, gens_a)?;
    let b_in_a = in_span(gens_a, gens_b)?;
    Ok(match (a_in_b, b_in_a) {
        (true, true) => SubgroupOrder::Equal,
        (true, false) => SubgroupOrder::AInB,
        (false, true) => SubgroupOrder::BInA,
        (false, false) => SubgroupOrder::Incomparable,
    })
}

/// Minimal number of generators: the count of invariant factors different from 1.
pub fn min_generators(g: &FgAbelianGroup) -> usize {
    g.invariant_factors().iter().filter(|f| !f.is_one()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(g: &FgAbelianGroup) -> Vec<i64> {
        g.nontrivial_factors()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    fn cyclic(fs: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic_factors(&fs.iter().map(|&x| x.into()).collect::<Vec<_>>())
    }

    #[test]
    fn single_relation_times_two() {
        let g = cokernel_group(&IntMatrix::from_rows(&[[2]]));
        assert_eq!(factors(&g), vec![2]);
        assert_eq!(g.to_string(), "Z/2");
    }

    #[test]
    fn no_relations_is_free() {
        let g = cokernel_group(&IntMatrix::zeros(3, 0));
        assert_eq!(factors(&g), vec![0, 0, 0]);
        assert_eq!(g.free_rank(), 3);
    }

    #[test]
    fn stacked_columns_give_z() {
        let g = cokernel_group(&IntMatrix::from_rows(&[[1, 0], [-1, 1], [0, -1]]));
        assert_eq!(factors(&g), vec![0]);
        assert!(g.is_infinite_cyclic());
        // every basis vector maps to the same generator up to sign
        let c: Vec<_> = (0..3)
            .map(|i| g.reduced_coordinates(&g.generator(i)).unwrap())
            .collect();
        assert_eq!(c[0], c[1]);
        assert_eq!(c[1], c[2]);
        assert!(c[0][0] == 1.into() || c[0][0] == (-1).into());
    }

    #[test]
    fn compare_examples() {
        let z = cyclic(&[0]);
        let one = GroupElement::from_i64(&[1]);
        let two = GroupElement::from_i64(&[2]);
        // class of A ⊕ A ⊕ A[1] is 1 + 1 - 1 = 1
        let summed = GroupElement::from_i64(&[1 + 1 - 1]);
        assert_eq!(subgroup_compare(&z, std::slice::from_ref(&one), &[summed]).unwrap(), SubgroupOrder::Equal);
        assert_eq!(subgroup_compare(&z, &[two], &[one]).unwrap(), SubgroupOrder::AInB);

        let g = cyclic(&[2, 0]);
        let a = GroupElement::from_i64(&[1, 0]);
        let b = GroupElement::from_i64(&[0, 1]);
        assert_eq!(subgroup_compare(&g, &[a], &[b]).unwrap(), SubgroupOrder::Incomparable);
    }

    #[test]
    fn compare_rejects_wrong_rank() {
        let z = cyclic(&[0]);
        let bad = GroupElement::from_i64(&[1, 0]);
        assert!(matches!(
            subgroup_compare(&z, &[bad], &[]),
            Err(AbelianError::WrongAmbient { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn min_generator_examples() {
        assert_eq!(min_generators(&FgAbelianGroup::trivial()), 0);
        assert_eq!(min_generators(&cyclic(&[2, 0])), 2);
        let g = cyclic(&[6, 4]);
        assert_eq!(factors(&g), vec![2, 12]);
        assert_eq!(min_generators(&g), 2);
    }

    #[test]
    fn element_formatting() {
        let g = cyclic(&[3]);
        assert_eq!(g.format_element(&GroupElement::from_i64(&[5])).unwrap(), "2 mod 3");
        let z = cyclic(&[0]);
        assert_eq!(z.format_element(&GroupElement::from_i64(&[-4])).unwrap(), "-4");
        assert_eq!(FgAbelianGroup::trivial().format_element(&GroupElement::zero(0)).unwrap(), "0");
    }

    #[test]
    fn order_of_groups() {
        assert_eq!(cyclic(&[6, 4]).order(), Some(24.into()));
        assert_eq!(cyclic(&[2, 0]).order(), None);
    }
}
