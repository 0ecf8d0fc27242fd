//! Basicness, the type of a basic pair, the arithmetic predicate for the five
//! families, and the grid sweep comparing the two.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::families::{make_pair_with_cap, FamilyError, FamilyId, FamilyPair, GridGroup, VertexLabel, Word};
use crate::graph::DegeneracyClass;
use crate::group::{is_prime, Subgroup, DEFAULT_ELEMENT_CAP};
use crate::perm::PermError;
use crate::quotient::{
    independence, normal_quotient, verify_og4, Orientation, PairOG4, QuotientError, QuotientReport,
    QuotientSummary,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("basic pair has both oriented and unoriented cyclic quotients but no independent pair")]
    MixedOrientation,
}

impl From<PermError> for ClassifierError {
    fn from(e: PermError) -> Self {
        ClassifierError::Family(FamilyError::Group(e))
    }
}

/// Which normal subgroups `is_basic` examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Minimal normal subgroups only.
    Fast,
    /// Every nontrivial normal subgroup.
    Exhaustive,
}

impl Mode {
    /// Exhaustive up to `threshold` group elements, fast above.
    pub fn auto(group_order: usize, threshold: usize) -> Mode {
        if group_order <= threshold {
            Mode::Exhaustive
        } else {
            Mode::Fast
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Mode::Fast),
            "exhaustive" => Ok(Mode::Exhaustive),
            _ => Err(format!("unknown mode {s:?}; expected fast or exhaustive")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasicType {
    Quasiprimitive,
    Biquasiprimitive,
    OrientedCycle,
    UnorientedCycle,
    IndependentCycle,
    NotBasic,
}

impl BasicType {
    pub fn label(self) -> &'static str {
        match self {
            BasicType::Quasiprimitive => "quasiprimitive",
            BasicType::Biquasiprimitive => "biquasiprimitive",
            BasicType::OrientedCycle => "oriented-cycle",
            BasicType::UnorientedCycle => "unoriented-cycle",
            BasicType::IndependentCycle => "independent-cycle",
            BasicType::NotBasic => "not-basic",
        }
    }

    pub fn is_cycle_type(self) -> bool {
        matches!(
            self,
            BasicType::OrientedCycle | BasicType::UnorientedCycle | BasicType::IndependentCycle
        )
    }
}

impl fmt::Display for BasicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of examining the normal quotients of a pair.
#[derive(Debug, Clone)]
pub struct Classification {
    pub mode: Mode,
    pub is_basic: bool,
    pub basic_type: BasicType,
    /// One report per examined nontrivial normal subgroup, in canonical order.
    pub quotients: Vec<QuotientReport>,
    /// Index into `quotients` of the first non-degenerate quotient.
    pub witness: Option<usize>,
    /// Indices of an independent pair of cyclic quotients, if any.
    pub independent_pair: Option<(usize, usize)>,
}

impl Classification {
    pub fn is_basic_independent_cycle(&self) -> bool {
        self.basic_type == BasicType::IndependentCycle
    }
}

/// Decides basicness of a validated pair and labels its type.
///
/// In fast mode only minimal normal subgroups are examined. That is exact:
/// every nontrivial normal subgroup contains a minimal one whose orbits
/// refine its own, so a degenerate minimal quotient forces a degenerate
/// larger one. For independence, the kernel of a cyclic quotient contains
/// the kernel of any minimal normal subgroup inside it, so an independent
/// pair exists among all cyclic quotients exactly when one exists among the
/// minimal ones.
pub fn classify(pair: &PairOG4, mode: Mode) -> Result<Classification, ClassifierError> {
    let subgroups: Vec<Subgroup> = match mode {
        Mode::Fast => pair.group.minimal_normal_subgroups(),
        Mode::Exhaustive => pair
            .group
            .all_normal_subgroups()
            .into_iter()
            .filter(|n| !n.is_trivial())
            .collect(),
    };
    let quotients = subgroups
        .iter()
        .map(|n| normal_quotient(pair, n))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = quotients
        .iter()
        .position(|q| q.degeneracy == DegeneracyClass::NonDegenerate);
    let cyclic: Vec<usize> = (0..quotients.len())
        .filter(|&k| quotients[k].degeneracy.cycle_length().is_some())
        .collect();
    let mut independent_pair = None;
    'search: for (x, &a) in cyclic.iter().enumerate() {
        for &b in &cyclic[x + 1..] {
            if independence(pair, &quotients[a], &quotients[b])?.independent {
                independent_pair = Some((a, b));
                break 'search;
            }
        }
    }
    let basic_type = if witness.is_some() {
        BasicType::NotBasic
    } else if quotients.iter().all(|q| q.degeneracy == DegeneracyClass::K1) {
        BasicType::Quasiprimitive
    } else if cyclic.is_empty() {
        BasicType::Biquasiprimitive
    } else if independent_pair.is_some() {
        BasicType::IndependentCycle
    } else {
        let oriented = cyclic
            .iter()
            .filter(|&&k| quotients[k].orientation == Orientation::Oriented)
            .count();
        if oriented == cyclic.len() {
            BasicType::OrientedCycle
        } else if oriented == 0 {
            BasicType::UnorientedCycle
        } else {
            return Err(ClassifierError::MixedOrientation);
        }
    };
    Ok(Classification {
        mode,
        is_basic: witness.is_none(),
        basic_type,
        quotients,
        witness,
        independent_pair,
    })
}

/// Classification of a family member, with the words naming each subgroup.
#[derive(Debug, Clone)]
pub struct BasicReport {
    pub family: FamilyId,
    pub r: u32,
    pub s: u32,
    pub group_order: usize,
    pub stabilizer_order: usize,
    pub classification: Classification,
    /// Generating words for each examined subgroup, parallel to `quotients`.
    pub subgroup_words: Vec<Vec<Word>>,
}

impl BasicReport {
    pub fn is_basic(&self) -> bool {
        self.classification.is_basic
    }

    pub fn basic_type(&self) -> BasicType {
        self.classification.basic_type
    }

    pub fn witness(&self) -> Option<&QuotientReport> {
        self.classification
            .witness
            .map(|k| &self.classification.quotients[k])
    }

    pub fn summary(&self) -> BasicSummary {
        let c = &self.classification;
        let words = |k: usize| self.subgroup_words[k].iter().map(Word::to_string).collect();
        BasicSummary {
            family: self.family,
            r: self.r,
            s: self.s,
            group_order: self.group_order,
            stabilizer_order: self.stabilizer_order,
            mode: c.mode,
            is_basic: c.is_basic,
            basic_type: c.basic_type,
            witness: c.witness.map(words),
            independent_pair: c.independent_pair.map(|(a, b)| [words(a), words(b)]),
            quotients: c
                .quotients
                .iter()
                .enumerate()
                .map(|(k, q)| WitnessSummary {
                    subgroup: words(k),
                    quotient: q.summary(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    pub subgroup: Vec<String>,
    #[serde(flatten)]
    pub quotient: QuotientSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasicSummary {
    pub family: FamilyId,
    pub r: u32,
    pub s: u32,
    pub group_order: usize,
    pub stabilizer_order: usize,
    pub mode: Mode,
    pub is_basic: bool,
    #[serde(rename = "type")]
    pub basic_type: BasicType,
    pub witness: Option<Vec<String>>,
    pub independent_pair: Option<[Vec<String>; 2]>,
    pub quotients: Vec<WitnessSummary>,
}

pub fn validate(fp: &FamilyPair) -> Result<PairOG4, ClassifierError> {
    Ok(verify_og4(fp.graph(), fp.group())?)
}

pub fn is_basic(fp: &FamilyPair, mode: Mode) -> Result<BasicReport, ClassifierError> {
    let pair = validate(fp)?;
    let classification = classify(&pair, mode)?;
    let subgroup_words = classification
        .quotients
        .iter()
        .map(|q| fp.grid.describe(&q.normal))
        .collect();
    Ok(BasicReport {
        family: fp.family,
        r: fp.r(),
        s: fp.s(),
        group_order: fp.group().order(),
        stabilizer_order: pair.facts.stabilizer_order,
        classification,
        subgroup_words,
    })
}

fn odd_prime(n: u32) -> bool {
    n % 2 == 1 && is_prime(n as usize)
}

fn twice_odd_prime(n: u32) -> bool {
    n % 2 == 0 && odd_prime(n / 2)
}

/// Membership of `(r, s)` in the family's line of the classification table,
/// with `p, q` ranging over odd primes.
pub fn theorem_predicate(family: FamilyId, r: u32, s: u32) -> Result<bool, FamilyError> {
    family.check_parameters(r, s)?;
    let (p, four) = (odd_prime, |n: u32| n == 4);
    Ok(match family {
        FamilyId::GammaG => (four(r) && p(s)) || (p(r) && four(s)) || (p(r) && p(s)),
        FamilyId::GammaPlusGPlus => {
            (four(r) && four(s)) || (four(r) && twice_odd_prime(s)) || (twice_odd_prime(r) && four(s))
        }
        FamilyId::GammaH => p(r) && (four(s) || twice_odd_prime(s)),
        FamilyId::GammaPlusHPlus => {
            (four(r) || twice_odd_prime(r)) && (four(s) || twice_odd_prime(s))
        }
        FamilyId::Gamma2G2 => p(r) && p(s),
    })
}

/// The separate constraints on `r` and on `s` that any basic member must
/// satisfy: `r ∈ {4, p}` in rows 1, 3, 5 and `r ∈ {4, 2p}` in rows 2, 4;
/// `s ∈ {4, q}` in rows 1, 5 and `s ∈ {4, 2q}` in rows 2, 3, 4.
pub fn necessity_constraints(family: FamilyId, r: u32, s: u32) -> (bool, bool) {
    let r_ok = match family {
        FamilyId::GammaG | FamilyId::GammaH | FamilyId::Gamma2G2 => r == 4 || odd_prime(r),
        FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus => r == 4 || twice_odd_prime(r),
    };
    let s_ok = match family {
        FamilyId::GammaG | FamilyId::Gamma2G2 => s == 4 || odd_prime(s),
        _ => s == 4 || twice_odd_prime(s),
    };
    (r_ok, s_ok)
}

/// Per-sweep settings.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Fixed mode, or `None` to choose per cell with [`Mode::auto`].
    pub mode: Option<Mode>,
    pub auto_threshold: usize,
    pub element_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: None,
            auto_threshold: 500,
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepCell {
    pub family: FamilyId,
    /// Requested parameters.
    pub r: u32,
    pub s: u32,
    /// Row 3 cells with `r` even are built as `H(s, r)`.
    pub swapped: bool,
    pub predicted: bool,
    /// `None` when the cell was skipped.
    pub computed: Option<bool>,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basic_type: Option<BasicType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub max_r: u32,
    pub max_s: u32,
    pub cells: Vec<SweepCell>,
    /// Cells where the computed status differs from the prediction.
    pub mismatches: Vec<SweepCell>,
    pub skipped: usize,
}

pub fn sweep(max_r: u32, max_s: u32, opts: SweepOptions) -> SweepReport {
    sweep_with_predicate(max_r, max_s, opts, |f, r, s| {
        theorem_predicate(f, r, s).unwrap_or(false)
    })
}

/// [`sweep`] against an arbitrary predicate, which receives the parameters
/// actually built.
pub fn sweep_with_predicate<P>(max_r: u32, max_s: u32, opts: SweepOptions, predicate: P) -> SweepReport
where
    P: Fn(FamilyId, u32, u32) -> bool + Sync,
{
    let mut jobs = Vec::new();
    for family in FamilyId::ALL {
        for r in 3..=max_r {
            for s in 3..=max_s {
                if let Ok((rr, ss, swapped)) = family.resolve_parameters(r, s) {
                    jobs.push((family, r, s, rr, ss, swapped));
                }
            }
        }
    }
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(family, r, s, rr, ss, swapped)| {
            let predicted = predicate(family, rr, ss);
            let mut cell = SweepCell {
                family,
                r,
                s,
                swapped,
                predicted,
                computed: None,
                agree: false,
                basic_type: None,
                mode: None,
                group_order: None,
                skipped: None,
            };
            let outcome = make_pair_with_cap(family, rr, ss, opts.element_cap)
                .map_err(ClassifierError::from)
                .and_then(|fp| {
                    let mode = opts
                        .mode
                        .unwrap_or_else(|| Mode::auto(fp.group().order(), opts.auto_threshold));
                    is_basic(&fp, mode)
                });
            match outcome {
                Ok(report) => {
                    let computed = report.classification.is_basic_independent_cycle();
                    cell.computed = Some(computed);
                    cell.agree = computed == predicted;
                    cell.basic_type = Some(report.basic_type());
                    cell.mode = Some(report.classification.mode);
                    cell.group_order = Some(report.group_order);
                }
                Err(e) => cell.skipped = Some(e.to_string()),
            }
            cell
        })
        .collect();
    let mismatches: Vec<SweepCell> = cells
        .iter()
        .filter(|c| c.computed.is_some() && !c.agree)
        .cloned()
        .collect();
    let skipped = cells.iter().filter(|c| c.skipped.is_some()).count();
    SweepReport {
        max_r,
        max_s,
        cells,
        mismatches,
        skipped,
    }
}

impl SweepReport {
    /// Plain-text table: one line per family listing the cells found basic of
    /// independent-cycle type, followed by any mismatches and skipped cells.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Basic pairs of independent-cycle type, 3 <= r <= {}, 3 <= s <= {}\n",
            self.max_r, self.max_s
        ));
        out.push_str(&format!("{:<5} {:<9} {:<9} {}\n", "Row", "Graph", "Group", "(r,s)"));
        for family in FamilyId::ALL {
            let hits: Vec<String> = self
                .cells
                .iter()
                .filter(|c| c.family == family && c.computed == Some(true) && !c.swapped)
                .map(|c| format!("({},{})", c.r, c.s))
                .collect();
            out.push_str(&format!(
                "{:<5} {:<9} {:<9} {}\n",
                family.row(),
                family.graph_name(),
                family.group_name(),
                if hits.is_empty() { "-".to_string() } else { hits.join(" ") }
            ));
        }
        let checked = self.cells.len() - self.skipped;
        out.push_str(&format!(
            "cells checked: {checked}, mismatches: {}, skipped: {}\n",
            self.mismatches.len(),
            self.skipped
        ));
        for c in &self.mismatches {
            out.push_str(&format!(
                "MISMATCH row{} ({},{}): predicted {}, computed {:?}\n",
                c.family.row(),
                c.r,
                c.s,
                c.predicted,
                c.computed
            ));
        }
        for c in self.cells.iter().filter(|c| c.skipped.is_some()) {
            out.push_str(&format!(
                "skipped row{} ({},{}): {}\n",
                c.family.row(),
                c.r,
                c.s,
                c.skipped.as_deref().unwrap_or("")
            ));
        }
        out
    }
}

/// Minimal normal subgroups of `H(r, s)` as generating words, in the cases
/// `r ∈ {p, 2p, 4}`, `s ∈ {4, 2q}` covered by the structure lemma for `H`.
pub fn expected_h_minimal_normals(r: u32, s: u32) -> Option<Vec<Word>> {
    use crate::families::Letter::{Mu, Nu};
    let mu = |k| Word::power(Mu, k);
    let nu2 = Word::power(Nu, 2);
    if odd_prime(r) && (s == 4 || twice_odd_prime(s)) {
        return Some(vec![mu(1), nu2]);
    }
    if twice_odd_prime(r) && twice_odd_prime(s) {
        let p = i64::from(r / 2);
        return Some(vec![mu(2), mu(p), nu2]);
    }
    if twice_odd_prime(r) && s == 4 {
        let p = i64::from(r / 2);
        return Some(vec![mu(2), mu(p), nu2, mu(p).then(Nu, 2)]);
    }
    if r == 4 && twice_odd_prime(s) {
        return Some(vec![mu(2), nu2]);
    }
    None
}

/// Minimal normal subgroups a family member is expected to have when its
/// parameters are on the predicate's list, as stated in the sufficiency
/// arguments. `None` where no explicit list is stated.
pub fn expected_family_minimal_normals(family: FamilyId, r: u32, s: u32) -> Option<Vec<Word>> {
    use crate::families::Letter::{Mu, Nu};
    let (mu, nu) = (|k| Word::power(Mu, k), |k| Word::power(Nu, k));
    if !theorem_predicate(family, r, s).ok()? {
        return None;
    }
    match family {
        FamilyId::GammaG if r == 4 => Some(vec![mu(2), nu(1)]),
        FamilyId::GammaG if s == 4 => Some(vec![mu(1), nu(2)]),
        FamilyId::GammaG | FamilyId::Gamma2G2 => Some(vec![mu(1), nu(1)]),
        FamilyId::GammaH => expected_h_minimal_normals(r, s),
        FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus if r != 4 || s != 4 => {
            Some(vec![mu(2), nu(2)])
        }
        _ => None,
    }
}

/// Comparison of computed minimal normal subgroups with an expected list.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileCheck {
    pub found: Vec<Vec<String>>,
    pub expected: Option<Vec<String>>,
    pub matches: Option<bool>,
}

/// Whether a normal subgroup of order two moves `(0,0)` to one of
/// `(2,0), (2,2), (0,2)`, and whether one of `r, s` is 4.
#[derive(Debug, Clone, Serialize)]
pub struct OrderTwoCheck {
    pub generator: String,
    pub image_of_origin: VertexLabel,
    pub swap_ok: bool,
    pub r_or_s_is_four: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub family: FamilyId,
    pub r: u32,
    pub s: u32,
    pub is_basic: bool,
    pub minimal_normals: ProfileCheck,
    /// Filled in for basic pairs of rows 1 to 4.
    pub order_two: Vec<OrderTwoCheck>,
    pub necessity: (bool, bool),
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.minimal_normals.matches != Some(false)
            && self.order_two.iter().all(|c| c.swap_ok && c.r_or_s_is_four)
            && (!self.is_basic || self.necessity == (true, true))
    }
}

/// Compares the minimal normal subgroups of `grid` with an expected list.
pub fn check_profile(grid: &GridGroup, expected: Option<&[Word]>) -> Result<ProfileCheck, ClassifierError> {
    let minimal = grid.group.minimal_normal_subgroups();
    let found = minimal
        .iter()
        .map(|h| grid.describe(h).iter().map(Word::to_string).collect())
        .collect();
    let matches = match expected {
        None => None,
        Some(words) => {
            let mut want = words
                .iter()
                .map(|w| grid.subgroup_of_words(std::slice::from_ref(w)))
                .collect::<Result<Vec<_>, _>>()?;
            want.sort();
            want.dedup();
            Some(want == minimal)
        }
    };
    Ok(ProfileCheck {
        found,
        expected: expected.map(|ws| ws.iter().map(Word::to_string).collect()),
        matches,
    })
}

/// Order-two normal subgroups of `grid` and where each sends `(0,0)`.
pub fn order_two_checks(grid: &GridGroup) -> Vec<OrderTwoCheck> {
    let origin = grid.vertices.vertex(0, 0).expect("origin is a vertex");
    let targets: Vec<Option<usize>> = [(2, 0), (2, 2), (0, 2)]
        .iter()
        .map(|&(i, j)| grid.vertices.vertex(i, j))
        .collect();
    grid.group
        .all_normal_subgroups()
        .into_iter()
        .filter(|h| h.order() == 2)
        .map(|h| {
            let l = h.elements().find(|g| !g.is_identity()).expect("order two").clone();
            let image = l.apply(origin);
            OrderTwoCheck {
                generator: grid.word_of(&l).map(|w| w.to_string()).unwrap_or_default(),
                image_of_origin: grid.vertices.label(image),
                swap_ok: targets.contains(&Some(image)),
                r_or_s_is_four: grid.r == 4 || grid.s == 4,
            }
        })
        .collect()
}

pub fn lemma_profiles(fp: &FamilyPair, mode: Mode) -> Result<LemmaReport, ClassifierError> {
    let report = is_basic(fp, mode)?;
    let expected = expected_family_minimal_normals(fp.family, fp.r(), fp.s());
    let minimal_normals = check_profile(&fp.grid, expected.as_deref())?;
    let order_two = if report.is_basic() && fp.family != FamilyId::Gamma2G2 {
        order_two_checks(&fp.grid)
    } else {
        Vec::new()
    };
    Ok(LemmaReport {
        family: fp.family,
        r: fp.r(),
        s: fp.s(),
        is_basic: report.is_basic(),
        minimal_normals,
        order_two,
        necessity: necessity_constraints(fp.family, fp.r(), fp.s()),
    })
}
