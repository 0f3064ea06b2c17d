//! Upper bounds on K0 of the wrapped category and the queries built on them:
//! classes of co-core words, generation verdicts, generator counts, Euler pairings,
//! and degree propagation between C0-close Legendrians.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::abelian::{
    min_generators, subgroup_compare, AbelianError, FgAbelianGroup, GroupElement, SubgroupOrder,
};
use crate::model::{HandleId, PresentationModel, Sign};
use crate::morse::{top_cohomology, MorseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrothendieckError {
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("word names unknown n-handle '{0}'")]
    UnknownHandle(HandleId),
    #[error("generation query needs at least one word")]
    EmptyWordSet,
    #[error("pairing vector has {found} entries, expected one per n-handle ({expected})")]
    WrongLength { expected: usize, found: usize },
    #[error("pairing does not descend: it takes value {value} on the relation of '{relation}'")]
    DoesNotDescend { relation: HandleId, value: BigInt },
    #[error("cannot parse word '{word}': {reason}")]
    WordParse { word: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// The bound is trivial, and 0 only surjects onto 0.
    Exact,
    UpperBound,
}

/// `H^n` (possibly twisted) as a surjective upper bound for K0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Bound {
    pub group: FgAbelianGroup,
    pub handles: Vec<HandleId>,
    pub relation_sources: Vec<HandleId>,
    pub twisted: bool,
    pub exactness: Exactness,
}

impl K0Bound {
    /// Projection from the free group on n-handles to invariant-factor coordinates.
    pub fn class_map(&self) -> &crate::abelian::IntMatrix {
        self.group.projection()
    }

    pub fn handle_index(&self, id: &HandleId) -> Option<usize> {
        self.handles.iter().position(|h| h == id)
    }

    /// Human-readable statement, e.g. `K0 ≤ Z/3 (upper bound)`.
    pub fn statement(&self) -> String {
        match self.exactness {
            Exactness::Exact => "K0 = 0 (exact)".to_string(),
            Exactness::UpperBound => format!("K0 ≤ {} (upper bound)", self.group),
        }
    }

    /// The caveat attached to every non-exact bound.
    pub fn caveat(&self) -> Option<String> {
        if self.exactness == Exactness::Exact {
            return None;
        }
        let nt = self.group.nontrivial_factors();
        let base = "K0 is a quotient of this group (the class map is surjective, possibly not injective)";
        Some(match nt.as_slice() {
            [k] if !k.is_zero() => format!("{base}; K0 ≅ Z/m for some m dividing {k}"),
            _ => base.to_string(),
        })
    }
}

pub fn k0_upper_bound(m: &PresentationModel, twisted: bool) -> Result<K0Bound, GrothendieckError> {
    let group = top_cohomology(m, twisted)?;
    let exactness = if group.is_trivial() {
        Exactness::Exact
    } else {
        Exactness::UpperBound
    };
    Ok(K0Bound {
        group,
        handles: m.n_handles().iter().map(|h| h.id.clone()).collect(),
        relation_sources: m.nm1_handles().iter().map(|h| h.id.clone()).collect(),
        twisted,
        exactness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub handle: HandleId,
    pub orientation: Sign,
}

/// An iterated boundary connected sum of oriented co-cores. The empty word is the zero class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CocoreWord {
    letters: Vec<Letter>,
}

impl CocoreWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn singleton(handle: HandleId, orientation: Sign) -> Self {
        Self::new(vec![Letter { handle, orientation }])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn plus_count(&self) -> usize {
        self.letters.iter().filter(|l| l.orientation == Sign::Plus).count()
    }

    pub fn minus_count(&self) -> usize {
        self.letters.iter().filter(|l| l.orientation == Sign::Minus).count()
    }

    /// `self ♮ other`
    pub fn connect(&self, other: &CocoreWord) -> CocoreWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        CocoreWord { letters }
    }

    /// The same disk with the opposite orientation: every summand is reversed.
    pub fn reversed(&self) -> CocoreWord {
        CocoreWord {
            letters: self
                .letters
                .iter()
                .map(|l| Letter {
                    handle: l.handle.clone(),
                    orientation: -l.orientation,
                })
                .collect(),
        }
    }

    pub fn oriented(&self, sign: Sign) -> CocoreWord {
        match sign {
            Sign::Plus => self.clone(),
            Sign::Minus => self.reversed(),
        }
    }

    /// Drops the letters for which `keep` is false.
    pub fn filtered(&self, keep: impl Fn(&Letter) -> bool) -> CocoreWord {
        CocoreWord {
            letters: self.letters.iter().filter(|l| keep(l)).cloned().collect(),
        }
    }
}

impl fmt::Display for CocoreWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("(empty)");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", l.orientation.symbol(), l.handle)?;
        }
        Ok(())
    }
}

impl FromStr for CocoreWord {
    type Err = GrothendieckError;

    /// Parses `+h1+h2-h3` (whitespace between tokens allowed, `−` accepted for `-`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| GrothendieckError::WordParse {
            word: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "(empty)" {
            return Ok(CocoreWord::default());
        }
        let mut letters = Vec::new();
        let mut chars = trimmed.chars().peekable();
        while let Some(c) = chars.next() {
            let orientation = match c {
                '+' => Sign::Plus,
                '-' | '−' => Sign::Minus,
                c if c.is_whitespace() => continue,
                _ => return Err(fail("each letter must start with '+' or '-'")),
            };
            let mut id = String::new();
            while let Some(&c) = chars.peek() {
                if c == '+' || c == '-' || c == '−' || c.is_whitespace() {
                    break;
                }
                id.push(c);
                chars.next();
            }
            if id.is_empty() {
                return Err(fail("sign without a handle id"));
            }
            letters.push(Letter {
                handle: HandleId::new(id),
                orientation,
            });
        }
        Ok(CocoreWord { letters })
    }
}

impl Serialize for CocoreWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.letters.is_empty() {
            s.serialize_str("")
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for CocoreWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Signed sum of the co-core classes named by `w`, as an ambient vector of `b.group`.
pub fn class_of_word(w: &CocoreWord, b: &K0Bound) -> Result<GroupElement, GrothendieckError> {
    let mut v = vec![BigInt::zero(); b.handles.len()];
    for l in w.letters() {
        let i = b
            .handle_index(&l.handle)
            .ok_or_else(|| GrothendieckError::UnknownHandle(l.handle.clone()))?;
        v[i] += l.orientation.value();
    }
    Ok(GroupElement::new(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupInfo {
    pub generators: Vec<GroupElement>,
    /// `K0-bound / subgroup`
    pub quotient: FgAbelianGroup,
    pub index: Option<BigInt>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum GenerationVerdict {
    Generates,
    SplitGeneratesProperSubgroup(SubgroupInfo),
}

impl fmt::Display for GenerationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerationVerdict::Generates => f.write_str("generates"),
            GenerationVerdict::SplitGeneratesProperSubgroup(s) => {
                write!(f, "split-generates; proper subgroup {}", s.description)
            }
        }
    }
}

/// Generation at the level of the K0 bound. Any nonempty set of words split-generates
/// (`a ⊕ a[1]` has class 0); the words generate exactly when their classes span the bound.
pub fn generation_verdict(
    b: &K0Bound,
    words: &[CocoreWord],
) -> Result<GenerationVerdict, GrothendieckError> {
    if words.is_empty() {
        return Err(GrothendieckError::EmptyWordSet);
    }
    let classes = words
        .iter()
        .map(|w| class_of_word(w, b))
        .collect::<Result<Vec<_>, _>>()?;
    let all: Vec<GroupElement> = (0..b.handles.len()).map(|i| b.group.generator(i)).collect();
    if subgroup_compare(&b.group, &classes, &all)? == SubgroupOrder::Equal {
        return Ok(GenerationVerdict::Generates);
    }
    let quotient = b.group.quotient_by(&classes)?;
    let index = quotient.order();
    let description = if b.group.is_infinite_cyclic() {
        let g = classes.iter().try_fold(BigInt::zero(), |acc, c| {
            let r = b.group.reduced_coordinates(c)?;
            Ok::<_, AbelianError>(acc.gcd(&r[0]))
        })?;
        if g.is_zero() {
            "0".to_string()
        } else {
            format!("{}Z", g.abs())
        }
    } else {
        match &index {
            Some(k) => format!("of index {k}"),
            None => "of infinite index".to_string(),
        }
    };
    Ok(GenerationVerdict::SplitGeneratesProperSubgroup(SubgroupInfo {
        generators: classes,
        quotient,
        index,
        description,
    }))
}

/// Upper bound on the number of generators of the wrapped category: `max(g(K0 bound), 1)`.
pub fn category_min_generators(b: &K0Bound) -> usize {
    min_generators(&b.group).max(1)
}

/// A linear functional on the free group on n-handles that vanishes on every relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerFunctional {
    pub weights: Vec<BigInt>,
}

impl EulerFunctional {
    pub fn evaluate(&self, x: &GroupElement) -> Result<BigInt, AbelianError> {
        if x.rank() != self.weights.len() {
            return Err(AbelianError::WrongAmbient {
                expected: self.weights.len(),
                found: x.rank(),
            });
        }
        Ok(self.weights.iter().zip(x.coordinates()).map(|(a, b)| a * b).sum())
    }
}

/// Intersection numbers of a closed exact Lagrangian with the co-cores, checked to
/// descend to the K0 bound.
pub fn euler_pairing(
    intersections: &[BigInt],
    b: &K0Bound,
) -> Result<EulerFunctional, GrothendieckError> {
    if intersections.len() != b.handles.len() {
        return Err(GrothendieckError::WrongLength {
            expected: b.handles.len(),
            found: intersections.len(),
        });
    }
    let f = EulerFunctional {
        weights: intersections.to_vec(),
    };
    let rel = b.group.relation_matrix();
    for (j, source) in b.relation_sources.iter().enumerate() {
        let value = f.evaluate(&GroupElement::new(rel.column(j)))?;
        if !value.is_zero() {
            return Err(GrothendieckError::DoesNotDescend {
                relation: source.clone(),
                value,
            });
        }
    }
    Ok(f)
}

/// Which end of `Λ0 ⊂ N(Λ1)` the known group belongs to. The functor runs from the
/// category stopped at `Λ1` (source) to the one stopped at `Λ0` (target).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C0Conclusion {
    TargetTrivial,
    SourceInfiniteCyclic,
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C0Report {
    pub known_side: Side,
    pub known_group: String,
    pub degree: i64,
    pub conclusion: C0Conclusion,
    pub explanation: String,
}

/// Degree rule for Legendrians in the ball, where both relative `H^n` are `Z` (asserted by
/// the caller): a trivial source with `d = ±1` forces a trivial target, and a `Z` target
/// with `d ≠ 0` forces a `Z` source. Nothing else follows.
pub fn c0_propagate(known: &FgAbelianGroup, which: Side, degree: i64) -> C0Report {
    let (conclusion, explanation) = match which {
        Side::Source if known.is_trivial() && degree.abs() == 1 => (
            C0Conclusion::TargetTrivial,
            "restriction is multiplication by ±1, so the target K0 is a quotient of 0".to_string(),
        ),
        Side::Target if known.is_infinite_cyclic() && degree != 0 => (
            C0Conclusion::SourceInfiniteCyclic,
            format!("multiplication by {degree} into Z is injective on Z, so the source K0 is Z"),
        ),
        _ if degree == 0 => (
            C0Conclusion::NoConclusion,
            "degree 0 carries no information (the unknot sits near every Legendrian)".to_string(),
        ),
        _ => (
            C0Conclusion::NoConclusion,
            "neither degree rule applies".to_string(),
        ),
    };
    C0Report {
        known_side: which,
        known_group: known.to_string(),
        degree,
        conclusion,
        explanation,
    }
}
