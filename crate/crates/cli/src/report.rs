//! The invariant report shared by the text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;
use weinstein_core::abelian::FgAbelianGroup;
use weinstein_core::grothendieck::{
    category_min_generators, class_of_word, generation_verdict, k0_upper_bound, CocoreWord,
    Exactness, GenerationVerdict, K0Bound,
};
use weinstein_core::model::PresentationModel;
use weinstein_core::abelian::GroupElement;
use weinstein_core::morse::{differential_matrix, top_cohomology};
use weinstein_core::relations::{format_relation, relation_vector, relations_for};

use crate::CliError;

pub const THOMASON_CAVEAT: &str =
    "verdict is at the level of the K0 bound; that open-closed map hits the unit is assumed, not checked";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub display: String,
    pub invariant_factors: Vec<String>,
}

impl From<&FgAbelianGroup> for GroupSummary {
    fn from(g: &FgAbelianGroup) -> Self {
        Self {
            display: g.to_string(),
            invariant_factors: g.nontrivial_factors().iter().map(|f| f.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K0Summary {
    pub twisted: bool,
    pub statement: String,
    pub exactness: Exactness,
    pub caveat: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationSummary {
    pub nm1_handle: String,
    pub complex: String,
    pub vector: Vec<String>,
    pub relation: String,
    /// The relation with local signs applied, when the twisted bound is selected.
    pub twisted_relation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub word: String,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThomasonSummary {
    pub words: Vec<String>,
    pub verdict: GenerationVerdict,
    pub summary: String,
    pub caveat: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub model: String,
    pub half_dim: u32,
    pub h_n: GroupSummary,
    pub h_n_twisted: Option<GroupSummary>,
    pub k0: K0Summary,
    pub min_generators: usize,
    pub relations: Vec<RelationSummary>,
    pub class: Option<ClassSummary>,
    pub thomason: Option<ThomasonSummary>,
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub twisted: bool,
    pub class: Option<CocoreWord>,
    pub thomason: Option<Vec<CocoreWord>>,
}

fn semantic(e: impl std::fmt::Display) -> CliError {
    CliError::Semantic(e.to_string())
}

pub fn build_report(m: &PresentationModel, opts: &ReportOptions) -> Result<InvariantReport, CliError> {
    let untwisted = top_cohomology(m, false).map_err(semantic)?;
    let twisted_group = if m.has_local_system() {
        Some(top_cohomology(m, true).map_err(semantic)?)
    } else {
        None
    };
    let bound: K0Bound = k0_upper_bound(m, opts.twisted).map_err(semantic)?;
    let twisted_d = if opts.twisted {
        Some(differential_matrix(m, true).map_err(semantic)?.differential)
    } else {
        None
    };
    let relations = relations_for(m)
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let v = relation_vector(t, m);
            RelationSummary {
                nm1_handle: t.source.to_string(),
                complex: t.to_string(),
                vector: v.coordinates().iter().map(|x| x.to_string()).collect(),
                relation: format_relation(&v, m),
                twisted_relation: twisted_d
                    .as_ref()
                    .map(|d| format_relation(&GroupElement::new(d.column(j)), m)),
            }
        })
        .collect();
    let class = match &opts.class {
        Some(w) => {
            let c = class_of_word(w, &bound).map_err(semantic)?;
            Some(ClassSummary {
                word: w.to_string(),
                class: bound.group.format_element(&c).map_err(semantic)?,
            })
        }
        None => None,
    };
    let thomason = match &opts.thomason {
        Some(words) => {
            let verdict = generation_verdict(&bound, words).map_err(semantic)?;
            Some(ThomasonSummary {
                words: words.iter().map(|w| w.to_string()).collect(),
                summary: verdict.to_string(),
                verdict,
                caveat: THOMASON_CAVEAT.to_string(),
            })
        }
        None => None,
    };
    Ok(InvariantReport {
        model: m.name().to_string(),
        half_dim: m.half_dim(),
        h_n: (&untwisted).into(),
        h_n_twisted: twisted_group.as_ref().map(Into::into),
        k0: K0Summary {
            twisted: opts.twisted,
            statement: bound.statement(),
            exactness: bound.exactness,
            caveat: bound.caveat(),
        },
        min_generators: category_min_generators(&bound),
        relations,
        class,
        thomason,
    })
}

impl InvariantReport {
    /// One-line summary: `H^n = Z/3; K0 ≤ Z/3 (upper bound); min generators ≤ 1`.
    pub fn headline(&self) -> String {
        let (label, group) = match (&self.h_n_twisted, self.k0.twisted) {
            (Some(t), true) => ("H^n(twisted)", &t.display),
            _ => ("H^n", &self.h_n.display),
        };
        let mut parts = vec![format!("{label} = {group}"), self.k0.statement.clone()];
        if self.k0.exactness == Exactness::UpperBound {
            parts.push(format!("min generators ≤ {}", self.min_generators));
        }
        if let [only] = self.relations.as_slice() {
            parts.push(format!("relation: {}", only.twisted_relation.as_ref().unwrap_or(&only.relation)));
        }
        parts.join("; ")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {} (n = {})", self.model, self.half_dim);
        let _ = writeln!(out, "{}", self.headline());
        if let Some(t) = &self.h_n_twisted {
            let _ = writeln!(out, "untwisted H^n = {}; twisted H^n = {}", self.h_n.display, t.display);
        }
        if let Some(c) = &self.k0.caveat {
            let _ = writeln!(out, "caveat: {c}");
        }
        let _ = writeln!(out, "min generators ≤ {}", self.min_generators);
        if !self.relations.is_empty() {
            let _ = writeln!(out, "relations:");
            for r in &self.relations {
                let _ = write!(out, "  {}: {}  =>  {}", r.nm1_handle, r.complex, r.relation);
                if let Some(t) = &r.twisted_relation {
                    let _ = write!(out, "  (twisted: {t})");
                }
                let _ = writeln!(out);
            }
        }
        if let Some(c) = &self.class {
            let _ = writeln!(out, "class of {}: {}", c.word, c.class);
        }
        if let Some(t) = &self.thomason {
            let _ = writeln!(out, "thomason {{{}}}: {}", t.words.join(", "), t.summary);
            let _ = writeln!(out, "note: {}", t.caveat);
        }
        out
    }
}
