//! Acyclic twisted complexes carried by the belt spheres, and their K0 relations.
//!
//! Each (n-1)-handle x yields the complex `{L_p1 → L_p2 → … → L_pm}` whose terms
//! follow the crossings of `Γ_x` in angular order: a positive crossing with `Λ_y`
//! contributes the co-core `C_y`, a negative one its reverse `C̄_y`. Connectors are
//! opaque labels; only the ordered signed terms carry algebra here.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::abelian::GroupElement;
use crate::model::{HandleId, PresentationModel, Sign};
use crate::morse::differential_matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub handle: HandleId,
    pub orientation: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedComplexSpec {
    pub source: HandleId,
    pub terms: Vec<Term>,
    pub connectors: Vec<String>,
}

impl TwistedComplexSpec {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for TwistedComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " -{}-> ", self.connectors[i - 1])?;
            }
            match t.orientation {
                Sign::Plus => write!(f, "C_{}", t.handle)?,
                Sign::Minus => write!(f, "~C_{}", t.handle)?,
            }
        }
        write!(f, "}}")
    }
}

/// One complex per (n-1)-handle, in declaration order.
pub fn relations_for(m: &PresentationModel) -> Vec<TwistedComplexSpec> {
    m.nm1_handles()
        .iter()
        .map(|x| {
            let terms: Vec<Term> = x
                .crossings
                .iter()
                .map(|c| Term {
                    handle: c.handle.clone(),
                    orientation: c.sign,
                })
                .collect();
            let connectors = (1..terms.len()).map(|i| format!("a{i}")).collect();
            TwistedComplexSpec {
                source: x.id.clone(),
                terms,
                connectors,
            }
        })
        .collect()
}

/// The K0 relation `Σ ±[C_y] = 0` of a complex, as a vector over the n-handles of `m`.
pub fn relation_vector(t: &TwistedComplexSpec, m: &PresentationModel) -> GroupElement {
    let mut v = vec![BigInt::from(0); m.n_handles().len()];
    for term in &t.terms {
        let i = m.n_index(&term.handle).expect("complex built from this model");
        v[i] += term.orientation.value();
    }
    GroupElement::new(v)
}

/// Renders a relation vector as `2[C_a] - [C_b] = 0`.
pub fn format_relation(v: &GroupElement, m: &PresentationModel) -> String {
    let mut out = String::new();
    for (c, h) in v.coordinates().iter().zip(m.n_handles()) {
        if c == &BigInt::from(0) {
            continue;
        }
        let neg = c < &BigInt::from(0);
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != BigInt::from(1) {
            out.push_str(&mag.to_string());
        }
        out.push_str(&format!("[C_{}]", h.id));
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(" = 0");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub nm1_handle: HandleId,
    pub relation: Vec<BigInt>,
    pub column: Vec<BigInt>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares each complex's relation vector with the matching column of the untwisted
/// differential. The two are computed along independent paths and must agree.
pub fn check_consistency(m: &PresentationModel) -> ConsistencyReport {
    let d = differential_matrix(m, false).expect("untwisted differential always exists");
    let mut report = ConsistencyReport::default();
    for (j, t) in relations_for(m).iter().enumerate() {
        let rel = relation_vector(t, m);
        let col = d.differential.column(j);
        report.checked += 1;
        if rel.coordinates() != col.as_slice() {
            report.mismatches.push(Mismatch {
                nm1_handle: t.source.clone(),
                relation: rel.coordinates().to_vec(),
                column: col,
            });
        }
    }
    report
}
