//! Distribution-level screen for `r` CISTs in `K_{2r-1} □ C_n`.
//!
//! A distribution is the per-K-copy inner-vertex count `n_j` of the tree
//! with fewest inner vertices. Every rule is a necessary condition, so an
//! empty survivor list would prove nonexistence; a non-empty one proves
//! nothing.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{CistError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Distribution {
    counts: Vec<usize>,
}

impl Distribution {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(CistError::InvalidParameter("empty distribution".into()));
        }
        Ok(Distribution { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn inner_total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(a_0, a_1, a_2, a_3)`; copies holding more than three are not counted.
    pub fn tallies(&self) -> [usize; 4] {
        let mut a = [0; 4];
        for &c in &self.counts {
            if c <= 3 {
                a[c] += 1;
            }
        }
        a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `|Inn| <= 2n - ceil(n/r)`.
    InnCap,
    /// `ceil((p-2)/r) <= |Inn|`, `p = n(2r-1)`.
    InnFloor,
    /// Lost edges forced inside copies: `sum C(n_j - 1, 2) <= 1`, or `0`
    /// when `r` does not divide `n`.
    LostEdges,
    /// `n_j <= 3`.
    CopyCap,
    /// `a_3 <= 1`.
    SingleFullCopy,
    /// `a_3 = 1` implies `r | n` and `n >= r`.
    FullCopyDivisibility,
    /// `a_0 = 0` when `2r - 1 > 6`.
    NoEmptyCopy,
    /// `a_0 = 0` implies `a_3 <= a_1 - ceil(n/r)`.
    FullVsSingle,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::InnCap,
        Rule::InnFloor,
        Rule::LostEdges,
        Rule::CopyCap,
        Rule::SingleFullCopy,
        Rule::FullCopyDivisibility,
        Rule::NoEmptyCopy,
        Rule::FullVsSingle,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Rule::InnCap => "inn-cap",
            Rule::InnFloor => "inn-floor",
            Rule::LostEdges => "lost-edges",
            Rule::CopyCap => "copy-cap",
            Rule::SingleFullCopy => "single-full-copy",
            Rule::FullCopyDivisibility => "full-copy-divisibility",
            Rule::NoEmptyCopy => "no-empty-copy",
            Rule::FullVsSingle => "full-vs-single",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub status: RuleStatus,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub outcomes: Vec<RuleOutcome>,
    pub survives: bool,
}

impl RuleTrace {
    pub fn failed(&self) -> impl Iterator<Item = Rule> + '_ {
        self.outcomes
            .iter()
            .filter(|o| o.status == RuleStatus::Fail)
            .map(|o| o.rule)
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn check_params(r: usize, n: usize) -> Result<()> {
    if r < 2 || n < 3 {
        return Err(CistError::InvalidParameter(format!(
            "screen needs r >= 2 and n >= 3, got r = {r}, n = {n}"
        )));
    }
    Ok(())
}

/// Evaluates every rule.
pub fn evaluate_distribution(r: usize, n: usize, d: &Distribution) -> Result<RuleTrace> {
    evaluate_with(r, n, d, &Rule::ALL.into_iter().collect())
}

/// Evaluates the rules in `enabled`; the others are reported not applicable.
pub fn evaluate_with(r: usize, n: usize, d: &Distribution, enabled: &BTreeSet<Rule>) -> Result<RuleTrace> {
    check_params(r, n)?;
    if d.len() != n {
        return Err(CistError::InvalidParameter(format!(
            "distribution has {} copies, expected {n}",
            d.len()
        )));
    }
    let (ri, ni) = (r as i64, n as i64);
    let p = ni * (2 * ri - 1);
    let inn = d.inner_total() as i64;
    let a = d.tallies();
    let divides = n.is_multiple_of(r);

    let mut outcomes = Vec::with_capacity(Rule::ALL.len());
    for rule in Rule::ALL {
        let (status, witness) = if !enabled.contains(&rule) {
            (RuleStatus::NotApplicable, "disabled".to_string())
        } else {
            let verdict = |ok: bool| if ok { RuleStatus::Pass } else { RuleStatus::Fail };
            match rule {
                Rule::InnCap => {
                    let cap = 2 * ni - div_ceil(ni, ri);
                    (verdict(inn <= cap), format!("|Inn| = {inn} <= 2n - ceil(n/r) = {cap}"))
                }
                Rule::InnFloor => {
                    let floor = div_ceil(p - 2, ri);
                    (verdict(floor <= inn), format!("ceil((p-2)/r) = {floor} <= |Inn| = {inn}"))
                }
                Rule::LostEdges => {
                    let forced: usize = d
                        .counts()
                        .iter()
                        .filter(|&&c| c >= 1)
                        .map(|&c| (c - 1) * (c.saturating_sub(2)) / 2)
                        .sum();
                    let bound = usize::from(divides);
                    (
                        verdict(forced <= bound),
                        format!("sum C(n_j-1, 2) = {forced} <= {bound}"),
                    )
                }
                Rule::CopyCap => {
                    let worst = d.counts().iter().copied().max().unwrap_or(0);
                    (verdict(worst <= 3), format!("max n_j = {worst} <= 3"))
                }
                Rule::SingleFullCopy => (verdict(a[3] <= 1), format!("a_3 = {} <= 1", a[3])),
                Rule::FullCopyDivisibility => {
                    if a[3] == 1 {
                        (
                            verdict(divides && n >= r),
                            format!("a_3 = 1 needs r | n and n >= r (r = {r}, n = {n})"),
                        )
                    } else {
                        (RuleStatus::NotApplicable, format!("a_3 = {}", a[3]))
                    }
                }
                Rule::NoEmptyCopy => {
                    if 2 * r - 1 > 6 {
                        (
                            verdict(a[0] == 0),
                            format!("a_0 = {}; an empty copy needs neighbours holding 2r-1 = {} > 6", a[0], 2 * r - 1),
                        )
                    } else {
                        (RuleStatus::NotApplicable, format!("2r-1 = {} <= 6", 2 * r - 1))
                    }
                }
                Rule::FullVsSingle => {
                    if a[0] == 0 {
                        let bound = a[1] as i64 - div_ceil(ni, ri);
                        (
                            verdict(a[3] as i64 <= bound),
                            format!("a_3 = {} <= a_1 - ceil(n/r) = {bound}", a[3]),
                        )
                    } else {
                        (RuleStatus::NotApplicable, format!("a_0 = {}", a[0]))
                    }
                }
            }
        };
        outcomes.push(RuleOutcome { rule, status, witness });
    }
    let survives = outcomes.iter().all(|o| o.status != RuleStatus::Fail);
    Ok(RuleTrace { outcomes, survives })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Survivor {
    /// `(a_0, a_1, a_2, a_3)`.
    pub profile: [usize; 4],
    /// Copies sorted ascending; the lexicographically smallest arrangement.
    pub representative: Vec<usize>,
    pub trace: RuleTrace,
}

/// All count profiles with `sum a_i = n` surviving every rule.
pub fn screen_survivors(r: usize, n: usize) -> Result<Vec<Survivor>> {
    survivors_with(r, n, &Rule::ALL.into_iter().collect())
}

/// Survivors under a subset of the rules.
pub fn survivors_with(r: usize, n: usize, enabled: &BTreeSet<Rule>) -> Result<Vec<Survivor>> {
    check_params(r, n)?;
    let mut out = Vec::new();
    for a0 in 0..=n {
        for a1 in 0..=n - a0 {
            for a2 in 0..=n - a0 - a1 {
                let a3 = n - a0 - a1 - a2;
                let profile = [a0, a1, a2, a3];
                let representative = profile_arrangement(profile);
                let d = Distribution::new(representative.clone())?;
                let trace = evaluate_with(r, n, &d, enabled)?;
                if trace.survives {
                    out.push(Survivor {
                        profile,
                        representative,
                        trace,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn profile_arrangement(profile: [usize; 4]) -> Vec<usize> {
    profile
        .iter()
        .enumerate()
        .flat_map(|(c, &times)| std::iter::repeat_n(c, times))
        .collect()
}

/// Lexicographically smallest image of `v` under rotation and reflection.
pub fn dihedral_canonical(v: &[usize]) -> Vec<usize> {
    let n = v.len();
    let mut best = v.to_vec();
    let mut rev: Vec<usize> = v.to_vec();
    rev.reverse();
    for base in [v.to_vec(), rev] {
        for s in 0..n {
            let cand: Vec<usize> = (0..n).map(|i| base[(i + s) % n]).collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// Largest `n` for which [`arrangements`] enumerates.
pub const MAX_ARRANGEMENT_COPIES: usize = 12;

/// Distinct cyclic arrangements of a profile, up to rotation and
/// reflection, each in canonical form, sorted.
pub fn arrangements(profile: [usize; 4]) -> Result<Vec<Vec<usize>>> {
    let n: usize = profile.iter().sum();
    if n > MAX_ARRANGEMENT_COPIES {
        return Err(CistError::InvalidParameter(format!(
            "arrangement enumeration limited to n <= {MAX_ARRANGEMENT_COPIES}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut left = profile;
    let mut cur = Vec::with_capacity(n);
    fn go(left: &mut [usize; 4], cur: &mut Vec<usize>, n: usize, seen: &mut BTreeSet<Vec<usize>>) {
        if cur.len() == n {
            seen.insert(dihedral_canonical(cur));
            return;
        }
        for c in 0..4 {
            if left[c] > 0 {
                left[c] -= 1;
                cur.push(c);
                go(left, cur, n, seen);
                cur.pop();
                left[c] += 1;
            }
        }
    }
    go(&mut left, &mut cur, n, &mut seen);
    Ok(seen.into_iter().collect())
}
