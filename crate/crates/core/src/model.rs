//! Declarative data model for (stopped) Weinstein presentations and its JSON schema.
//!
//! Only the handles of index n-1 and n are modeled. A stop's (n-1)-cores enter as
//! n-handles tagged [`Origin::StopLinking`]; after that they are ordinary generators.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// An orientation or intersection sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v)
            .ok_or_else(|| de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HandleId(String);

impl HandleId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for HandleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for HandleId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    #[default]
    Intrinsic,
    StopLinking,
}

fn plus() -> Sign {
    Sign::Plus
}

/// An index-n handle: attaching sphere, co-core, and the chosen co-core orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NHandle {
    pub id: HandleId,
    #[serde(default = "plus")]
    pub orientation: Sign,
    #[serde(default)]
    pub loose: bool,
    #[serde(default)]
    pub origin: Origin,
}

impl NHandle {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: HandleId::new(id),
            orientation: Sign::Plus,
            loose: false,
            origin: Origin::Intrinsic,
        }
    }

    pub fn loose(mut self, loose: bool) -> Self {
        self.loose = loose;
        self
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }
}

/// One point of `Λ_y ∩ Γ_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Crossing {
    pub handle: HandleId,
    pub sign: Sign,
}

impl Crossing {
    pub fn new(handle: impl Into<String>, sign: Sign) -> Self {
        Self {
            handle: HandleId::new(handle),
            sign,
        }
    }
}

/// The crossings on one belt sphere, in angular order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedCrossingList(Vec<Crossing>);

impl SignedCrossingList {
    pub fn new(crossings: Vec<Crossing>) -> Self {
        Self(crossings)
    }

    pub fn as_slice(&self) -> &[Crossing] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Crossing> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn count(&self, id: &HandleId, sign: Sign) -> usize {
        self.0.iter().filter(|c| &c.handle == id && c.sign == sign).count()
    }

    /// Positive crossings with `id` (p in the usual notation).
    pub fn plus_count(&self, id: &HandleId) -> usize {
        self.count(id, Sign::Plus)
    }

    /// Negative crossings with `id` (q).
    pub fn minus_count(&self, id: &HandleId) -> usize {
        self.count(id, Sign::Minus)
    }

    /// Geometric intersection number `p + q` with `id`.
    pub fn geometric(&self, id: &HandleId) -> usize {
        self.0.iter().filter(|c| &c.handle == id).count()
    }

    /// Algebraic intersection number `p - q` with `id`.
    pub fn algebraic(&self, id: &HandleId) -> i64 {
        self.plus_count(id) as i64 - self.minus_count(id) as i64
    }

    pub(crate) fn as_mut_vec(&mut self) -> &mut Vec<Crossing> {
        &mut self.0
    }
}

impl<'a> IntoIterator for &'a SignedCrossingList {
    type Item = &'a Crossing;
    type IntoIter = std::slice::Iter<'a, Crossing>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// An index-(n-1) handle, described by the crossings on its belt sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nm1Handle {
    pub id: HandleId,
    #[serde(default)]
    pub crossings: SignedCrossingList,
    /// Local-system monodromy per crossing, when the presentation carries a twist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_sign: Option<Vec<Sign>>,
}

impl Nm1Handle {
    pub fn new(id: impl Into<String>, crossings: Vec<Crossing>) -> Self {
        Self {
            id: HandleId::new(id),
            crossings: SignedCrossingList::new(crossings),
            local_sign: None,
        }
    }

    pub fn with_local_signs(mut self, signs: Vec<Sign>) -> Self {
        self.local_sign = Some(signs);
        self
    }

    /// Local sign of crossing `i`, `+1` when the handle carries none.
    pub fn local_sign_at(&self, i: usize) -> Sign {
        self.local_sign
            .as_ref()
            .and_then(|s| s.get(i).copied())
            .unwrap_or(Sign::Plus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: local_sign has {found} entries but there are {expected} crossings")]
    LocalSignLength {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: duplicate id '{id}'")]
    DuplicateId { path: String, id: HandleId },
    #[error("{path}: crossing names unknown n-handle '{id}'")]
    DanglingReference { path: String, id: HandleId },
    #[error("no n-handle with id '{0}'")]
    UnknownNHandle(HandleId),
}

impl ModelError {
    /// Schema errors are malformed documents; the rest are referential problems.
    pub fn is_schema(&self) -> bool {
        matches!(self, ModelError::Schema { .. } | ModelError::LocalSignLength { .. })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    n: u32,
    #[serde(default)]
    n_handles: Vec<NHandle>,
    #[serde(default)]
    nm1_handles: Vec<Nm1Handle>,
}

/// A validated presentation: n-handles, (n-1)-handles, and their crossing data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationModel {
    name: String,
    n: u32,
    n_handles: Vec<NHandle>,
    nm1_handles: Vec<Nm1Handle>,
}

impl PresentationModel {
    pub fn new(
        name: impl Into<String>,
        n: u32,
        n_handles: Vec<NHandle>,
        nm1_handles: Vec<Nm1Handle>,
    ) -> Result<Self, ModelError> {
        let model = Self {
            name: name.into(),
            n,
            n_handles,
            nm1_handles,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn empty(name: impl Into<String>, n: u32) -> Self {
        Self::new(name, n, Vec::new(), Vec::new()).expect("empty model is valid")
    }

    /// Checks every invariant of the model, reporting the first violation with its path.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::Schema {
                path: "n".into(),
                message: format!("half dimension must be at least 2, got {}", self.n),
            });
        }
        for (i, h) in self.nm1_handles.iter().enumerate() {
            if let Some(ls) = &h.local_sign {
                if ls.len() != h.crossings.len() {
                    return Err(ModelError::LocalSignLength {
                        path: format!("nm1_handles[{i}].local_sign"),
                        expected: h.crossings.len(),
                        found: ls.len(),
                    });
                }
            }
        }

        let mut seen = HashSet::new();
        for (i, h) in self.n_handles.iter().enumerate() {
            if !seen.insert(&h.id) {
                return Err(ModelError::DuplicateId {
                    path: format!("n_handles[{i}].id"),
                    id: h.id.clone(),
                });
            }
        }
        let mut seen_nm1 = HashSet::new();
        for (i, h) in self.nm1_handles.iter().enumerate() {
            if !seen_nm1.insert(&h.id) {
                return Err(ModelError::DuplicateId {
                    path: format!("nm1_handles[{i}].id"),
                    id: h.id.clone(),
                });
            }
            for (j, c) in h.crossings.iter().enumerate() {
                if !seen.contains(&c.handle) {
                    return Err(ModelError::DanglingReference {
                        path: format!("nm1_handles[{i}].crossings[{j}].handle"),
                        id: c.handle.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn half_dim(&self) -> u32 {
        self.n
    }

    pub fn n_handles(&self) -> &[NHandle] {
        &self.n_handles
    }

    pub fn nm1_handles(&self) -> &[Nm1Handle] {
        &self.nm1_handles
    }

    pub fn n_index(&self, id: &HandleId) -> Option<usize> {
        self.n_handles.iter().position(|h| &h.id == id)
    }

    pub fn nm1_index(&self, id: &HandleId) -> Option<usize> {
        self.nm1_handles.iter().position(|h| &h.id == id)
    }

    pub fn n_handle(&self, id: &HandleId) -> Option<&NHandle> {
        self.n_handles.iter().find(|h| &h.id == id)
    }

    pub fn nm1_handle(&self, id: &HandleId) -> Option<&Nm1Handle> {
        self.nm1_handles.iter().find(|h| &h.id == id)
    }

    /// True when every (n-1)-handle carries local signs, so the twisted differential is defined.
    pub fn has_local_system(&self) -> bool {
        !self.nm1_handles.is_empty() && self.nm1_handles.iter().all(|h| h.local_sign.is_some())
    }

    /// Reverses the co-core orientation of one n-handle, flipping each of its crossing signs.
    pub fn reorient(&mut self, id: &HandleId) -> Result<(), ModelError> {
        let idx = self.n_index(id).ok_or_else(|| ModelError::UnknownNHandle(id.clone()))?;
        self.n_handles[idx].orientation = -self.n_handles[idx].orientation;
        for h in &mut self.nm1_handles {
            for c in h.crossings.as_mut_vec() {
                if &c.handle == id {
                    c.sign = -c.sign;
                }
            }
        }
        Ok(())
    }

    /// The same presentation read with the opposite global co-orientation convention.
    pub fn with_flipped_convention(&self) -> Self {
        let mut out = self.clone();
        for h in &mut out.nm1_handles {
            for c in h.crossings.as_mut_vec() {
                c.sign = -c.sign;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub(crate) fn n_handles_mut(&mut self) -> &mut Vec<NHandle> {
        &mut self.n_handles
    }

    pub(crate) fn nm1_handles_mut(&mut self) -> &mut Vec<Nm1Handle> {
        &mut self.nm1_handles
    }
}

/// Parses and validates a presentation document.
pub fn load_and_validate(document: &str) -> Result<PresentationModel, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ModelError::Schema {
            path: if path == "." { "$".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    PresentationModel::new(doc.name, doc.n, doc.n_handles, doc.nm1_handles)
}
