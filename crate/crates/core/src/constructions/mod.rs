//! Explicit CIST families.

mod appendix;
mod lift;
mod parametric;
mod mcist;

use std::fmt;

pub use appendix::{
    dataset_tree_set, validate_appendix, Applied, Dataset, Discrepancy, DiscrepancyReport, FamilySummary,
    HostSpec, Issue, RawToken, Resolution, DATASETS, RESOLUTIONS,
};
pub use lift::lift_to_odd;
pub use parametric::{
    construct_k2r_cn, construct_k2r_pn, construct_k5_c3k, construct_k5_cn, construct_tm, construct_tm33,
};
pub use mcist::{mcist_case, mcist_table, mcist_value, mcist_witness, render_table, McistCase, McistRow};

use crate::error::{CistError, Result};
use crate::verify::TreeSet;

/// Fixed families backed by embedded datasets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedFamily {
    K7C3,
    K7C4,
    K9C4,
    K9C5,
}

impl FixedFamily {
    pub const ALL: [FixedFamily; 4] = [FixedFamily::K7C3, FixedFamily::K7C4, FixedFamily::K9C4, FixedFamily::K9C5];

    pub fn dataset(&self) -> &'static str {
        match self {
            FixedFamily::K7C3 => "K7_C3",
            FixedFamily::K7C4 => "K7_C4",
            FixedFamily::K9C4 => "K9_C4",
            FixedFamily::K9C5 => "K9_C5",
        }
    }
}

/// The embedded tree set for `family`, with curated repairs applied.
pub fn construct_fixed(family: FixedFamily) -> Result<TreeSet> {
    dataset_tree_set(family.dataset())
}

/// A construction with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    K2rPn { r: usize, n: usize },
    K2rCn { r: usize, n: usize },
    K5C3k { n: usize },
    K5Cn { n: usize },
    Fixed(FixedFamily),
    Tm3p3p3q { p: usize, pp: usize, q: usize },
    Tm33q { q: usize },
    McistWitness { m: usize, n: usize },
}

impl FamilyId {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyId::K2rPn { .. } => "K2R_PN",
            FamilyId::K2rCn { .. } => "K2R_CN",
            FamilyId::K5C3k { .. } => "K5_C3K",
            FamilyId::K5Cn { .. } => "K5_CN",
            FamilyId::Fixed(f) => f.dataset(),
            FamilyId::Tm3p3p3q { .. } => "TM_3P3P3Q",
            FamilyId::Tm33q { .. } => "TM_33Q",
            FamilyId::McistWitness { .. } => "MCIST_WITNESS",
        }
    }

    /// Parses a tag such as `K2R_CN` or `k2r-cn` (case and `-`/`_`
    /// insensitive) with its parameters. Missing parameters are errors.
    pub fn from_tag(
        tag: &str,
        r: Option<usize>,
        n: Option<usize>,
        m: Option<usize>,
        p: Option<usize>,
        pp: Option<usize>,
        q: Option<usize>,
    ) -> Result<Self> {
        let need = |x: Option<usize>, name: &str| {
            x.ok_or_else(|| CistError::InvalidParameter(format!("family {tag} needs --{name}")))
        };
        let norm = tag.to_ascii_uppercase().replace('-', "_");
        Ok(match norm.as_str() {
            "K2R_PN" => FamilyId::K2rPn { r: need(r, "r")?, n: need(n, "n")? },
            "K2R_CN" => FamilyId::K2rCn { r: need(r, "r")?, n: need(n, "n")? },
            "K5_C3K" => FamilyId::K5C3k { n: need(n, "n")? },
            "K5_CN" => FamilyId::K5Cn { n: need(n, "n")? },
            "K7_C3" => FamilyId::Fixed(FixedFamily::K7C3),
            "K7_C4" => FamilyId::Fixed(FixedFamily::K7C4),
            "K9_C4" => FamilyId::Fixed(FixedFamily::K9C4),
            "K9_C5" => FamilyId::Fixed(FixedFamily::K9C5),
            "TM_3P3P3Q" | "TM" => FamilyId::Tm3p3p3q {
                p: need(p, "p")?,
                pp: need(pp, "pp")?,
                q: need(q, "q")?,
            },
            "TM_33Q" | "TM33" => FamilyId::Tm33q { q: need(q, "q")? },
            "MCIST_WITNESS" | "MCIST" => FamilyId::McistWitness { m: need(m, "m")?, n: need(n, "n")? },
            _ => return Err(CistError::InvalidParameter(format!("unknown family {tag:?}"))),
        })
    }

    pub fn build(&self) -> Result<TreeSet> {
        match *self {
            FamilyId::K2rPn { r, n } => construct_k2r_pn(r, n),
            FamilyId::K2rCn { r, n } => construct_k2r_cn(r, n),
            FamilyId::K5C3k { n } => construct_k5_c3k(n),
            FamilyId::K5Cn { n } => construct_k5_cn(n),
            FamilyId::Fixed(f) => construct_fixed(f),
            FamilyId::Tm3p3p3q { p, pp, q } => construct_tm(p, pp, q),
            FamilyId::Tm33q { q } => construct_tm33(q),
            FamilyId::McistWitness { m, n } => mcist_witness(m, n),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyId::K2rPn { r, n } | FamilyId::K2rCn { r, n } => write!(f, "{}(r={r}, n={n})", self.tag()),
            FamilyId::K5C3k { n } | FamilyId::K5Cn { n } => write!(f, "{}(n={n})", self.tag()),
            FamilyId::Fixed(_) => f.write_str(self.tag()),
            FamilyId::Tm3p3p3q { p, pp, q } => write!(f, "{}(p={p}, p'={pp}, q={q})", self.tag()),
            FamilyId::Tm33q { q } => write!(f, "{}(q={q})", self.tag()),
            FamilyId::McistWitness { m, n } => write!(f, "{}(m={m}, n={n})", self.tag()),
        }
    }
}
