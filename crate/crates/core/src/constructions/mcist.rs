//! Maximum number of CISTs in `K_m □ C_n` and matching witnesses.

use std::fmt;

use serde::Serialize;

use super::appendix::dataset_tree_set;
use super::lift::lift_to_odd;
use super::parametric::{construct_k2r_cn, construct_k5_cn};
use crate::diagnostics::diagnostics;
use crate::error::{CistError, Result};
use crate::verify::TreeSet;

/// Which part of the closed form decides `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum McistCase {
    /// `m` even, `m/2` trees from the spine-and-fan family.
    EvenM,
    /// `m = 3`, two trees.
    M3,
    /// `m = 5`, three trees for every `n`.
    M5,
    /// `K_7 □ C_3`, four trees.
    K7C3,
    /// `K_7 □ C_4`, four trees.
    K7C4,
    /// `K_9 □ C_4`, five trees.
    K9C4,
    /// `K_9 □ C_5`, five trees.
    K9C5,
    /// `K_9 □ C_3` has no five trees.
    K9C3Floor,
    /// `m ∈ {7, 9}` with `n >= (m+1)/2 + 1`.
    SmallOddLargeN,
    /// odd `m >= 11`.
    OddM11Plus,
}

impl McistCase {
    pub fn label(&self) -> &'static str {
        match self {
            McistCase::EvenM => "even-m",
            McistCase::M3 => "m3",
            McistCase::M5 => "m5",
            McistCase::K7C3 => "k7-c3",
            McistCase::K7C4 => "k7-c4",
            McistCase::K9C4 => "k9-c4",
            McistCase::K9C5 => "k9-c5",
            McistCase::K9C3Floor => "k9-c3-floor",
            McistCase::SmallOddLargeN => "m7-m9-large-n",
            McistCase::OddM11Plus => "odd-m11-plus",
        }
    }

    /// True when the value is `ceil(m/2)` rather than `floor(m/2)`.
    pub fn is_ceiling(&self) -> bool {
        matches!(
            self,
            McistCase::M3 | McistCase::M5 | McistCase::K7C3 | McistCase::K7C4 | McistCase::K9C4 | McistCase::K9C5
        )
    }
}

impl fmt::Display for McistCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn check_range(m: usize, n: usize) -> Result<()> {
    if m < 3 || n < 3 {
        return Err(CistError::InvalidParameter(format!(
            "K_m □ C_n needs m, n >= 3, got ({m}, {n})"
        )));
    }
    Ok(())
}

pub fn mcist_case(m: usize, n: usize) -> Result<McistCase> {
    check_range(m, n)?;
    Ok(match (m, n) {
        (m, _) if m % 2 == 0 => McistCase::EvenM,
        (3, _) => McistCase::M3,
        (5, _) => McistCase::M5,
        (7, 3) => McistCase::K7C3,
        (7, 4) => McistCase::K7C4,
        (9, 4) => McistCase::K9C4,
        (9, 5) => McistCase::K9C5,
        (9, 3) => McistCase::K9C3Floor,
        (7, _) | (9, _) => McistCase::SmallOddLargeN,
        _ => McistCase::OddM11Plus,
    })
}

/// `mcist(K_m □ C_n)`.
pub fn mcist_value(m: usize, n: usize) -> Result<usize> {
    let case = mcist_case(m, n)?;
    Ok(if case.is_ceiling() { m.div_ceil(2) } else { m / 2 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McistRow {
    pub m: usize,
    pub n: usize,
    pub value: usize,
    pub case: McistCase,
    pub bound: &'static str,
}

pub fn mcist_table(ms: impl IntoIterator<Item = usize>, ns: impl IntoIterator<Item = usize> + Clone) -> Result<Vec<McistRow>> {
    let mut rows = Vec::new();
    for m in ms {
        for n in ns.clone() {
            let case = mcist_case(m, n)?;
            rows.push(McistRow {
                m,
                n,
                value: mcist_value(m, n)?,
                case,
                bound: if case.is_ceiling() { "ceiling" } else { "floor" },
            });
        }
    }
    Ok(rows)
}

/// Aligned text rendering of a table.
pub fn render_table(rows: &[McistRow]) -> String {
    let mut s = format!("{:>3} {:>3} {:>5}  {:<8} {}\n", "m", "n", "mcist", "bound", "case");
    for r in rows {
        s.push_str(&format!(
            "{:>3} {:>3} {:>5}  {:<8} {}\n",
            r.m, r.n, r.value, r.bound, r.case
        ));
    }
    s
}

/// A tree set on `K_m □ C_n` with `mcist_value(m, n)` trees.
pub fn mcist_witness(m: usize, n: usize) -> Result<TreeSet> {
    let case = mcist_case(m, n)?;
    match case {
        McistCase::M3 => Err(CistError::Unsupported(
            "witnesses for m = 3 are not constructed here".into(),
        )),
        McistCase::EvenM => construct_k2r_cn(m / 2, n),
        McistCase::M5 => construct_k5_cn(n),
        McistCase::K7C3 => dataset_tree_set("K7_C3"),
        McistCase::K7C4 => dataset_tree_set("K7_C4"),
        McistCase::K9C4 => dataset_tree_set("K9_C4"),
        McistCase::K9C5 => dataset_tree_set("K9_C5"),
        McistCase::K9C3Floor | McistCase::SmallOddLargeN | McistCase::OddM11Plus => {
            let base = construct_k2r_cn(m / 2, n)?;
            lift_to_odd(&base, &diagnostics(base.host(), &base))
        }
    }
}
