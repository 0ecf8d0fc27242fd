//! The five graph-group families built on the torus grid `ℤ_r × ℤ_s`.
//!
//! Vertices `(i, j)` of `Γ(r, s)` are numbered `i·s + j`; on the double cover
//! the vertex `(i, j)_δ` is `δ·rs + i·s + j`. The parity subgraph `Γ⁺(r, s)`
//! keeps the vertices with `i ≡ j (mod 2)` and renumbers them in increasing
//! order of their `Γ(r, s)` number.
//!
//! Group elements are written as words in `μ, ν, σ, τ`. Each word is first
//! evaluated as an affine map of the coordinates, then realised as a
//! permutation of the vertex set and checked to be a graph automorphism.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, UGraph};
use crate::group::{GroupShape, PermGroup, Subgroup, DEFAULT_ELEMENT_CAP};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters ({r}, {s}) for {family}: {reason}")]
    InvalidParameters {
        family: String,
        r: u32,
        s: u32,
        reason: &'static str,
    },
    #[error("word {0} does not preserve the vertex set")]
    LeavesVertexSet(String),
    #[error("word {0} is not a graph automorphism")]
    NotAutomorphism(String),
    #[error("no subgroup named {0:?} for this family")]
    UnknownSubgroup(String),
    #[error("constructed graph is not connected")]
    NotConnected,
    #[error("constructed graph is not 4-regular")]
    NotTetravalent,
    #[error(transparent)]
    Group(#[from] PermError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The five families of graph-group pairs, numbered as rows 1 to 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// `(Γ(r,s), G(r,s))`, at least one of `r, s` odd.
    GammaG,
    /// `(Γ⁺(r,s), G⁺(r,s))`, both even.
    GammaPlusGPlus,
    /// `(Γ(r,s), H(r,s))`, `r` odd and `s` even.
    GammaH,
    /// `(Γ⁺(r,s), H⁺(r,s))`, both even.
    GammaPlusHPlus,
    /// `(Γ₂(r,s), G₂(r,s))`, both odd.
    Gamma2G2,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] = [
        FamilyId::GammaG,
        FamilyId::GammaPlusGPlus,
        FamilyId::GammaH,
        FamilyId::GammaPlusHPlus,
        FamilyId::Gamma2G2,
    ];

    pub fn row(self) -> u8 {
        match self {
            FamilyId::GammaG => 1,
            FamilyId::GammaPlusGPlus => 2,
            FamilyId::GammaH => 3,
            FamilyId::GammaPlusHPlus => 4,
            FamilyId::Gamma2G2 => 5,
        }
    }

    pub fn from_row(row: u8) -> Option<Self> {
        Self::ALL.get(usize::from(row).checked_sub(1)?).copied()
    }

    pub fn graph_name(self) -> &'static str {
        match self {
            FamilyId::GammaG | FamilyId::GammaH => "Γ(r,s)",
            FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus => "Γ⁺(r,s)",
            FamilyId::Gamma2G2 => "Γ₂(r,s)",
        }
    }

    pub fn group_name(self) -> &'static str {
        match self {
            FamilyId::GammaG => "G(r,s)",
            FamilyId::GammaPlusGPlus => "G⁺(r,s)",
            FamilyId::GammaH => "H(r,s)",
            FamilyId::GammaPlusHPlus => "H⁺(r,s)",
            FamilyId::Gamma2G2 => "G₂(r,s)",
        }
    }

    pub fn check_parameters(self, r: u32, s: u32) -> Result<(), FamilyError> {
        let fail = |reason| {
            Err(FamilyError::InvalidParameters {
                family: self.to_string(),
                r,
                s,
                reason,
            })
        };
        if r < 3 || s < 3 {
            return fail("r and s must be at least 3");
        }
        let (r_odd, s_odd) = (r % 2 == 1, s % 2 == 1);
        match self {
            FamilyId::GammaG if !r_odd && !s_odd => fail("at least one of r, s must be odd"),
            FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus if r_odd || s_odd => {
                fail("r and s must both be even")
            }
            FamilyId::GammaH if !r_odd || s_odd => fail("r must be odd and s even"),
            FamilyId::Gamma2G2 if !r_odd || !s_odd => fail("r and s must both be odd"),
            _ => Ok(()),
        }
    }

    /// Parameters to build for a requested cell. Row 3 with `r` even and `s`
    /// odd is realised as `H(s, r)`, with the roles of the two cyclic
    /// quotients exchanged; the flag reports that swap.
    pub fn resolve_parameters(self, r: u32, s: u32) -> Result<(u32, u32, bool), FamilyError> {
        if self == FamilyId::GammaH && r >= 3 && s >= 3 && r % 2 == 0 && s % 2 == 1 {
            self.check_parameters(s, r)?;
            return Ok((s, r, true));
        }
        self.check_parameters(r, s)?;
        Ok((r, s, false))
    }

    pub fn sigma_kind(self) -> SigmaKind {
        match self {
            FamilyId::Gamma2G2 => SigmaKind::Double,
            _ => SigmaKind::Plain,
        }
    }

    pub fn layout(self) -> Layout {
        match self {
            FamilyId::GammaG | FamilyId::GammaH => Layout::Grid,
            FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus => Layout::ParityGrid,
            FamilyId::Gamma2G2 => Layout::DoubleGrid,
        }
    }

    /// Generating words for the family's group.
    pub fn generator_words(self) -> Vec<Word> {
        use Letter::*;
        match self {
            FamilyId::GammaG => vec![Word::letter(Mu), Word::letter(Nu), Word::letter(Sigma)],
            FamilyId::GammaPlusGPlus => vec![
                Word::power(Mu, 2),
                Word::letter(Mu).then(Nu, 1),
                Word::letter(Sigma),
            ],
            FamilyId::GammaH => vec![
                Word::letter(Mu),
                Word::letter(Sigma).then(Nu, 1),
                Word::letter(Tau),
            ],
            FamilyId::GammaPlusHPlus => vec![
                Word::power(Mu, 2),
                Word::letter(Sigma).then(Mu, 1).then(Nu, 1),
                Word::letter(Tau),
            ],
            FamilyId::Gamma2G2 => vec![
                Word::letter(Mu),
                Word::letter(Nu),
                Word::letter(Sigma),
                Word::letter(Tau),
            ],
        }
    }

    /// The two cyclic normal subgroups singled out for each family, on the
    /// `μ` side and the `ν` side.
    pub fn distinguished_normal_subgroups(self) -> [Word; 2] {
        use Letter::*;
        match self {
            FamilyId::GammaG | FamilyId::Gamma2G2 => [Word::letter(Mu), Word::letter(Nu)],
            FamilyId::GammaH => [Word::letter(Mu), Word::power(Nu, 2)],
            FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus => {
                [Word::power(Mu, 2), Word::power(Nu, 2)]
            }
        }
    }

    /// Whether the quotient by the `μ`-side distinguished subgroup is
    /// oriented (the `ν`-side one never is).
    pub fn mu_side_oriented(self) -> bool {
        matches!(self, FamilyId::GammaG | FamilyId::GammaPlusGPlus)
    }

    /// `(name, generating words)` for every named subgroup of the family.
    fn named_subgroup_words(self, r: u32, s: u32) -> Vec<(String, Vec<Word>)> {
        use Letter::*;
        let mut out: Vec<(String, Vec<Word>)> = Vec::new();
        let mut push = |name: &str, words: Vec<Word>| out.push((name.to_string(), words));
        match self {
            FamilyId::GammaG => {
                push("M~", vec![Word::letter(Mu), Word::letter(Sigma)]);
                push("M", vec![Word::letter(Mu)]);
                push("N", vec![Word::letter(Nu)]);
            }
            FamilyId::GammaPlusGPlus => {
                push("M~+", vec![Word::power(Mu, 2), Word::letter(Sigma)]);
                push("M+", vec![Word::power(Mu, 2)]);
                push("N+", vec![Word::power(Nu, 2)]);
            }
            FamilyId::GammaH => {
                push("M", vec![Word::letter(Mu)]);
                push(
                    "N#",
                    vec![Word::power(Nu, 2), Word::letter(Tau).then(Sigma, 1).then(Nu, 1)],
                );
            }
            FamilyId::GammaPlusHPlus => {
                push("M+", vec![Word::power(Mu, 2)]);
                push("N+", vec![Word::power(Nu, 2)]);
            }
            FamilyId::Gamma2G2 => {
                push("M", vec![Word::letter(Mu)]);
                push("N", vec![Word::letter(Nu)]);
                push("M^", vec![Word::letter(Mu), Word::letter(Sigma).then(Tau, 1)]);
                push("N^", vec![Word::letter(Nu), Word::letter(Sigma)]);
            }
        }
        // M_t = <μ^t>, N_t = <ν^t> for proper divisors t > 1 that lie in the group.
        let even_only_mu = matches!(self, FamilyId::GammaPlusGPlus | FamilyId::GammaPlusHPlus);
        let even_only_nu = self != FamilyId::GammaG && self != FamilyId::Gamma2G2;
        for t in (2..r).filter(|t| r % t == 0 && (!even_only_mu || t % 2 == 0)) {
            out.push((format!("M_{t}"), vec![Word::power(Mu, t as i64)]));
        }
        for t in (2..s).filter(|t| s % t == 0 && (!even_only_nu || t % 2 == 0)) {
            out.push((format!("N_{t}"), vec![Word::power(Nu, t as i64)]));
        }
        out
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row{}", self.row())
    }
}

impl FromStr for FamilyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let digits = lower.strip_prefix("row").unwrap_or(&lower);
        digits
            .parse::<u8>()
            .ok()
            .and_then(FamilyId::from_row)
            .ok_or_else(|| format!("unknown family {s:?}; expected row1..row5"))
    }
}

/// Which reflection `σ` denotes: `(i, j) ↦ (−i, j)` on the single grid, or
/// `(i, j)_δ ↦ (i, −j)_{δ+1}` on the double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaKind {
    Plain,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Mu,
    Nu,
    Sigma,
    Tau,
}

impl Letter {
    fn name(self) -> &'static str {
        match self {
            Letter::Mu => "mu",
            Letter::Nu => "nu",
            Letter::Sigma => "sigma",
            Letter::Tau => "tau",
        }
    }

    fn map(self, sigma: SigmaKind) -> AffineMap {
        let id = AffineMap::IDENTITY;
        match (self, sigma) {
            (Letter::Mu, _) => AffineMap { i_shift: 1, ..id },
            (Letter::Nu, _) => AffineMap { j_shift: 1, ..id },
            (Letter::Sigma, SigmaKind::Plain) => AffineMap { i_sign: -1, ..id },
            (Letter::Sigma, SigmaKind::Double) => AffineMap {
                j_sign: -1,
                flip: true,
                ..id
            },
            (Letter::Tau, _) => AffineMap {
                i_sign: -1,
                j_sign: -1,
                ..id
            },
        }
    }
}

/// A product of powers of `μ, ν, σ, τ`, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<(Letter, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![(l, 1)])
    }

    pub fn power(l: Letter, k: i64) -> Self {
        Word(vec![(l, k)])
    }

    pub fn then(mut self, l: Letter, k: i64) -> Self {
        self.0.push((l, k));
        self
    }

    pub fn affine(&self, sigma: SigmaKind) -> AffineMap {
        self.0.iter().fold(AffineMap::IDENTITY, |acc, &(l, k)| {
            acc.then(&l.map(sigma).pow(k))
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, (l, k)) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", l.name())?;
            if *k != 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = String;

    /// Parses forms like `mu^2*nu`, `tau*sigma*nu^-1`, or `1`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for factor in text.split('*') {
            let (name, exp) = match factor.trim().split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|e| e.to_string())?),
                None => (factor.trim(), 1),
            };
            let l = match name {
                "mu" => Letter::Mu,
                "nu" => Letter::Nu,
                "sigma" => Letter::Sigma,
                "tau" => Letter::Tau,
                other => return Err(format!("unknown letter {other:?}")),
            };
            w = w.then(l, exp);
        }
        Ok(w)
    }
}

/// `(i, j, δ) ↦ (i_sign·i + i_shift, j_sign·j + j_shift, δ + flip)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    pub i_sign: i64,
    pub i_shift: i64,
    pub j_sign: i64,
    pub j_shift: i64,
    pub flip: bool,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap {
        i_sign: 1,
        i_shift: 0,
        j_sign: 1,
        j_shift: 0,
        flip: false,
    };

    /// `self` followed by `next`.
    pub fn then(&self, next: &AffineMap) -> AffineMap {
        AffineMap {
            i_sign: self.i_sign * next.i_sign,
            i_shift: next.i_sign * self.i_shift + next.i_shift,
            j_sign: self.j_sign * next.j_sign,
            j_shift: next.j_sign * self.j_shift + next.j_shift,
            flip: self.flip ^ next.flip,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap {
            i_sign: self.i_sign,
            i_shift: -self.i_sign * self.i_shift,
            j_sign: self.j_sign,
            j_shift: -self.j_sign * self.j_shift,
            flip: self.flip,
        }
    }

    pub fn pow(&self, k: i64) -> AffineMap {
        let step = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(AffineMap::IDENTITY, |acc, _| acc.then(&step))
    }

    pub fn apply(&self, r: u32, s: u32, v: VertexLabel) -> VertexLabel {
        let (r, s) = (i64::from(r), i64::from(s));
        VertexLabel {
            i: (self.i_sign * i64::from(v.i) + self.i_shift).rem_euclid(r) as u32,
            j: (self.j_sign * i64::from(v.j) + self.j_shift).rem_euclid(s) as u32,
            sheet: v.sheet.map(|d| d ^ u8::from(self.flip)),
        }
    }
}

/// Coordinates `(i, j)` of a grid vertex, with the sheet `δ` on the double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub i: u32,
    pub j: u32,
    pub sheet: Option<u8>,
}

impl Serialize for VertexLabel {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.sheet {
            None => [self.i, self.j].serialize(ser),
            Some(d) => [self.i, self.j, u32::from(d)].serialize(ser),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sheet {
            None => write!(f, "({},{})", self.i, self.j),
            Some(d) => write!(f, "({},{})_{}", self.i, self.j, d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    /// `X = ℤ_r × ℤ_s`
    Grid,
    /// `X⁺`, the same-parity vertices
    ParityGrid,
    /// `X₂ = X × ℤ₂`
    DoubleGrid,
}

/// A labelled vertex set with the numbering described in the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    layout: Layout,
    r: u32,
    s: u32,
    labels: Vec<VertexLabel>,
    /// Indexed by `δ·rs + i·s + j`.
    index: Vec<Option<u32>>,
}

impl VertexSet {
    pub fn new(layout: Layout, r: u32, s: u32) -> Self {
        let rs = (r * s) as usize;
        let sheets: &[Option<u8>] = match layout {
            Layout::DoubleGrid => &[Some(0), Some(1)],
            _ => &[None],
        };
        let mut labels = Vec::new();
        let mut index = vec![None; rs * sheets.len()];
        for &sheet in sheets {
            for i in 0..r {
                for j in 0..s {
                    if layout == Layout::ParityGrid && (i + j) % 2 == 1 {
                        continue;
                    }
                    let v = VertexLabel { i, j, sheet };
                    index[Self::raw(r, s, v)] = Some(labels.len() as u32);
                    labels.push(v);
                }
            }
        }
        VertexSet {
            layout,
            r,
            s,
            labels,
            index,
        }
    }

    fn raw(r: u32, s: u32, v: VertexLabel) -> usize {
        let rs = (r * s) as usize;
        usize::from(v.sheet.unwrap_or(0)) * rs + (v.i * s + v.j) as usize
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    /// Vertex number of `(i, j)` (sheet 0 on the double cover), reducing
    /// the coordinates modulo `r` and `s`.
    pub fn vertex(&self, i: i64, j: i64) -> Option<usize> {
        let sheet = (self.layout == Layout::DoubleGrid).then_some(0);
        self.vertex_on_sheet(i, j, sheet)
    }

    pub fn vertex_on_sheet(&self, i: i64, j: i64, sheet: Option<u8>) -> Option<usize> {
        if (self.layout == Layout::DoubleGrid) != sheet.is_some() {
            return None;
        }
        let v = VertexLabel {
            i: i.rem_euclid(i64::from(self.r)) as u32,
            j: j.rem_euclid(i64::from(self.s)) as u32,
            sheet,
        };
        self.index
            .get(Self::raw(self.r, self.s, v))
            .copied()
            .flatten()
            .map(|x| x as usize)
    }

    pub fn realize(&self, map: &AffineMap) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.len());
        for &v in &self.labels {
            let w = map.apply(self.r, self.s, v);
            images.push(self.index[Self::raw(self.r, self.s, w)]? as usize);
        }
        Permutation::from_images(images).ok()
    }

    /// The four neighbours `(i ± 1, j ± 1)` (on the other sheet for the double cover).
    fn grid_neighbors(&self, v: VertexLabel) -> impl Iterator<Item = Option<usize>> + '_ {
        let (i, j) = (i64::from(v.i), i64::from(v.j));
        let sheet = v.sheet.map(|d| d ^ 1);
        [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .into_iter()
            .map(move |(di, dj)| self.vertex_on_sheet(i + di, j + dj, sheet))
    }
}

/// A graph together with the coordinate labels of its vertices.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: UGraph,
    pub vertices: VertexSet,
}

fn grid_graph(layout: Layout, r: u32, s: u32) -> Result<LabeledGraph, GraphError> {
    let vertices = VertexSet::new(layout, r, s);
    let mut edges = Vec::new();
    for (u, &label) in vertices.labels().iter().enumerate() {
        for v in vertices.grid_neighbors(label).flatten() {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    let graph = UGraph::build(vertices.len(), &edges)?;
    Ok(LabeledGraph { graph, vertices })
}

fn check_at_least_three(r: u32, s: u32, family: &str) -> Result<(), FamilyError> {
    if r < 3 || s < 3 {
        return Err(FamilyError::InvalidParameters {
            family: family.to_string(),
            r,
            s,
            reason: "r and s must be at least 3",
        });
    }
    Ok(())
}

/// `Γ(r, s)` on `ℤ_r × ℤ_s`, with `(i, j) ~ (i ± 1, j ± 1)`.
pub fn gamma(r: u32, s: u32) -> Result<LabeledGraph, FamilyError> {
    check_at_least_three(r, s, "Γ(r,s)")?;
    Ok(grid_graph(Layout::Grid, r, s)?)
}

/// `Γ⁺(r, s)`, the subgraph of `Γ(r, s)` induced on same-parity vertices.
pub fn gamma_plus(r: u32, s: u32) -> Result<LabeledGraph, FamilyError> {
    FamilyId::GammaPlusGPlus.check_parameters(r, s)?;
    let full = gamma(r, s)?;
    let keep: Vec<usize> = (0..full.vertices.len())
        .filter(|&v| {
            let l = full.vertices.label(v);
            (l.i + l.j) % 2 == 0
        })
        .collect();
    let (graph, _) = full.graph.induced(&keep)?;
    Ok(LabeledGraph {
        graph,
        vertices: VertexSet::new(Layout::ParityGrid, r, s),
    })
}

/// `Γ₂(r, s)`, the standard double cover of `Γ(r, s)`, for odd `r, s`.
pub fn gamma_2(r: u32, s: u32) -> Result<LabeledGraph, FamilyError> {
    FamilyId::Gamma2G2.check_parameters(r, s)?;
    Ok(grid_graph(Layout::DoubleGrid, r, s)?)
}

/// A named subgroup with its generating words and isomorphism type.
#[derive(Debug, Clone)]
pub struct NamedSubgroup {
    pub name: String,
    pub generators: Vec<Word>,
    pub subgroup: Subgroup,
    pub shape: GroupShape,
}

/// A permutation group on a labelled grid graph, with its generators
/// realised from words.
#[derive(Debug, Clone)]
pub struct GridGroup {
    pub r: u32,
    pub s: u32,
    pub sigma: SigmaKind,
    pub graph: UGraph,
    pub vertices: VertexSet,
    pub group: PermGroup,
    pub generators: Vec<(Word, Permutation)>,
    pub named: BTreeMap<String, NamedSubgroup>,
}

impl GridGroup {
    fn build(
        labeled: LabeledGraph,
        r: u32,
        s: u32,
        sigma: SigmaKind,
        words: Vec<Word>,
        cap: usize,
    ) -> Result<Self, FamilyError> {
        let LabeledGraph { graph, vertices } = labeled;
        let mut generators = Vec::with_capacity(words.len());
        for w in words {
            let p = vertices
                .realize(&w.affine(sigma))
                .ok_or_else(|| FamilyError::LeavesVertexSet(w.to_string()))?;
            if !graph.is_automorphism(&p) {
                return Err(FamilyError::NotAutomorphism(w.to_string()));
            }
            generators.push((w, p));
        }
        let group = PermGroup::with_cap(generators.iter().map(|(_, p)| p.clone()).collect(), cap)?;
        Ok(GridGroup {
            r,
            s,
            sigma,
            graph,
            vertices,
            group,
            generators,
            named: BTreeMap::new(),
        })
    }

    /// The group element a word denotes.
    pub fn realize(&self, w: &Word) -> Result<Permutation, FamilyError> {
        let p = self
            .vertices
            .realize(&w.affine(self.sigma))
            .ok_or_else(|| FamilyError::LeavesVertexSet(w.to_string()))?;
        if !self.group.contains(&p) {
            return Err(FamilyError::Group(PermError::NotInGroup));
        }
        Ok(p)
    }

    /// The subgroup generated by the given words.
    pub fn subgroup_of_words(&self, words: &[Word]) -> Result<Subgroup, FamilyError> {
        let perms = words
            .iter()
            .map(|w| self.realize(w))
            .collect::<Result<Vec<_>, _>>()?;
        if perms.is_empty() {
            return Ok(self.group.trivial_subgroup());
        }
        Ok(self.group.subgroup(&perms)?)
    }

    pub fn named_subgroup(&self, name: &str) -> Result<&NamedSubgroup, FamilyError> {
        self.named
            .get(name)
            .ok_or_else(|| FamilyError::UnknownSubgroup(name.to_string()))
    }

    /// The normal form `μ^a ν^b σ^c τ^d` (`0 ≤ a < r`, `0 ≤ b < s`,
    /// `c, d ∈ {0, 1}`) of a group element, with trivial factors left out.
    pub fn word_of(&self, p: &Permutation) -> Option<Word> {
        use Letter::*;
        for a in 0..i64::from(self.r) {
            for b in 0..i64::from(self.s) {
                for (c, d) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let mut w = Word::identity();
                    for (l, k) in [(Mu, a), (Nu, b), (Sigma, c), (Tau, d)] {
                        if k != 0 {
                            w = w.then(l, k);
                        }
                    }
                    if self.vertices.realize(&w.affine(self.sigma)).as_ref() == Some(p) {
                        return Some(w);
                    }
                }
            }
        }
        None
    }

    /// Generating words for a subgroup: for a cyclic subgroup, the simplest
    /// normal form among its generators; otherwise the normal forms of its
    /// canonical generators.
    pub fn describe(&self, h: &Subgroup) -> Vec<Word> {
        if let GroupShape::Cyclic(n) = h.shape() {
            let best = h
                .elements()
                .filter(|g| g.order() == n)
                .filter_map(|g| self.word_of(g))
                .min_by_key(|w| (w.0.len(), w.0.iter().map(|&(_, k)| k).collect::<Vec<_>>()));
            if let Some(w) = best {
                return vec![w];
            }
        }
        h.generators()
            .iter()
            .map(|g| self.word_of(g).unwrap_or_default())
            .collect()
    }

    fn add_named(&mut self, name: String, words: Vec<Word>) -> Result<(), FamilyError> {
        let subgroup = self.subgroup_of_words(&words)?;
        let shape = subgroup.shape();
        self.named.insert(
            name.clone(),
            NamedSubgroup {
                name,
                generators: words,
                subgroup,
                shape,
            },
        );
        Ok(())
    }
}

/// A validated member of one of the five families.
#[derive(Debug, Clone)]
pub struct FamilyPair {
    pub family: FamilyId,
    pub grid: GridGroup,
}

impl FamilyPair {
    pub fn r(&self) -> u32 {
        self.grid.r
    }

    pub fn s(&self) -> u32 {
        self.grid.s
    }

    pub fn graph(&self) -> &UGraph {
        &self.grid.graph
    }

    pub fn group(&self) -> &PermGroup {
        &self.grid.group
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.grid.vertices
    }

    pub fn named_subgroup(&self, name: &str) -> Result<&NamedSubgroup, FamilyError> {
        self.grid.named_subgroup(name)
    }
}

pub fn make_pair(family: FamilyId, r: u32, s: u32) -> Result<FamilyPair, FamilyError> {
    make_pair_with_cap(family, r, s, DEFAULT_ELEMENT_CAP)
}

pub fn make_pair_with_cap(
    family: FamilyId,
    r: u32,
    s: u32,
    cap: usize,
) -> Result<FamilyPair, FamilyError> {
    family.check_parameters(r, s)?;
    let labeled = match family.layout() {
        Layout::Grid => gamma(r, s)?,
        Layout::ParityGrid => gamma_plus(r, s)?,
        Layout::DoubleGrid => gamma_2(r, s)?,
    };
    if !labeled.graph.is_regular(4) {
        return Err(FamilyError::NotTetravalent);
    }
    if !labeled.graph.is_connected() {
        return Err(FamilyError::NotConnected);
    }
    let mut grid = GridGroup::build(
        labeled,
        r,
        s,
        family.sigma_kind(),
        family.generator_words(),
        cap,
    )?;
    for (name, words) in family.named_subgroup_words(r, s) {
        grid.add_named(name, words)?;
    }
    Ok(FamilyPair { family, grid })
}

/// `D_r × C_s = ⟨μ, σ⟩ × ⟨ν⟩` acting on `Γ(r, s)`; factors named `H` and `K`.
pub fn dihedral_times_cyclic(r: u32, s: u32) -> Result<GridGroup, FamilyError> {
    use Letter::*;
    let words = vec![Word::letter(Mu), Word::letter(Sigma), Word::letter(Nu)];
    let mut g = GridGroup::build(gamma(r, s)?, r, s, SigmaKind::Plain, words, DEFAULT_ELEMENT_CAP)?;
    g.add_named("H".into(), vec![Word::letter(Mu), Word::letter(Sigma)])?;
    g.add_named("K".into(), vec![Word::letter(Nu)])?;
    Ok(g)
}

/// `D_r × D_s = ⟨μ, σ⟩ × ⟨ν, στ⟩` acting on `Γ(r, s)`; factors named `H` and `K`.
pub fn dihedral_times_dihedral(r: u32, s: u32) -> Result<GridGroup, FamilyError> {
    use Letter::*;
    let flip_j = Word::letter(Sigma).then(Tau, 1);
    let words = vec![
        Word::letter(Mu),
        Word::letter(Sigma),
        Word::letter(Nu),
        flip_j.clone(),
    ];
    let mut g = GridGroup::build(gamma(r, s)?, r, s, SigmaKind::Plain, words, DEFAULT_ELEMENT_CAP)?;
    g.add_named("H".into(), vec![Word::letter(Mu), Word::letter(Sigma)])?;
    g.add_named("K".into(), vec![Word::letter(Nu), flip_j])?;
    Ok(g)
}

/// `H(r, s) = ⟨μ, σν, τ⟩` on `Γ(r, s)` for any `r ≥ 3` and even `s ≥ 4`.
///
/// For even `r` the graph is disconnected, so this is not a family pair, but
/// the group is still the overgroup of `H⁺(r, s)` used in minimal normal
/// subgroup arguments.
pub fn h_group(r: u32, s: u32) -> Result<GridGroup, FamilyError> {
    if r < 3 || s < 4 || s % 2 == 1 {
        return Err(FamilyError::InvalidParameters {
            family: "H(r,s)".into(),
            r,
            s,
            reason: "need r >= 3 and s even",
        });
    }
    let mut g = GridGroup::build(
        gamma(r, s)?,
        r,
        s,
        SigmaKind::Plain,
        FamilyId::GammaH.generator_words(),
        DEFAULT_ELEMENT_CAP,
    )?;
    for (name, words) in FamilyId::GammaH.named_subgroup_words(r, s) {
        g.add_named(name, words)?;
    }
    Ok(g)
}

/// `G(r, s)` on the full grid `Γ(r, s)` for any `r, s ≥ 3`, used as the
/// index-two overgroup of `G⁺(r, s)` when both are even.
pub fn g_group(r: u32, s: u32) -> Result<GridGroup, FamilyError> {
    let mut g = GridGroup::build(
        gamma(r, s)?,
        r,
        s,
        SigmaKind::Plain,
        FamilyId::GammaG.generator_words(),
        DEFAULT_ELEMENT_CAP,
    )?;
    for (name, words) in FamilyId::GammaG.named_subgroup_words(r, s) {
        g.add_named(name, words)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn gamma_3_3_neighbourhood() {
        let g = gamma(3, 3).unwrap();
        let v = g.vertices.vertex(0, 0).unwrap();
        let mut got: Vec<VertexLabel> = g
            .graph
            .neighbors(v)
            .iter()
            .map(|&w| g.vertices.label(w as usize))
            .collect();
        got.sort();
        let want: Vec<VertexLabel> = [(1, 1), (1, 2), (2, 1), (2, 2)]
            .iter()
            .map(|&(i, j)| VertexLabel { i, j, sheet: None })
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn gamma_3_5_counts() {
        let g = gamma(3, 5).unwrap().graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (15, 30));
        assert!(g.is_regular(4) && g.is_connected());
    }

    #[test]
    fn gamma_4_4_splits_by_parity() {
        let g = gamma(4, 4).unwrap().graph;
        let comps = g.component_labels();
        assert_eq!(comps.iter().filter(|&&c| c == 0).count(), 8);
        assert_eq!(comps.iter().filter(|&&c| c == 1).count(), 8);
        assert!(comps.iter().all(|&c| c < 2));
    }

    #[test]
    fn parity_and_double_graphs() {
        let p = gamma_plus(4, 6).unwrap().graph;
        assert_eq!(p.vertex_count(), 12);
        assert!(p.is_regular(4) && p.is_connected());
        assert_eq!(gamma_plus(6, 10).unwrap().graph.vertex_count(), 30);
        assert!(gamma_plus(5, 6).is_err());
        let d = gamma_2(3, 3).unwrap().graph;
        assert_eq!(d.vertex_count(), 18);
        assert!(d.is_regular(4));
        assert!(gamma_2(3, 5).unwrap().graph.is_connected());
        assert!(gamma_2(3, 4).is_err());
        assert!(gamma(2, 5).is_err());
    }

    #[test]
    fn double_grid_matches_standard_double_cover() {
        for (r, s) in [(3, 3), (3, 5), (5, 7)] {
            assert_eq!(
                gamma_2(r, s).unwrap().graph,
                gamma(r, s).unwrap().graph.standard_double_cover()
            );
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(make_pair(FamilyId::GammaG, 3, 5).unwrap().group().order(), 30);
        assert_eq!(make_pair(FamilyId::GammaH, 3, 4).unwrap().group().order(), 24);
        assert_eq!(make_pair(FamilyId::Gamma2G2, 3, 3).unwrap().group().order(), 36);
        assert_eq!(make_pair(FamilyId::GammaG, 3, 3).unwrap().group().order(), 18);
        assert_eq!(make_pair(FamilyId::GammaPlusHPlus, 4, 4).unwrap().group().order(), 16);
    }

    #[test]
    fn parameter_checks() {
        assert!(make_pair(FamilyId::GammaG, 4, 6).is_err());
        assert!(make_pair(FamilyId::GammaH, 4, 3).is_err());
        assert!(make_pair(FamilyId::GammaPlusGPlus, 4, 5).is_err());
        assert!(make_pair(FamilyId::Gamma2G2, 3, 4).is_err());
        assert_eq!(FamilyId::GammaH.resolve_parameters(4, 3).unwrap(), (3, 4, true));
        assert_eq!(FamilyId::GammaH.resolve_parameters(3, 4).unwrap(), (3, 4, false));
        assert!(FamilyId::GammaH.resolve_parameters(4, 4).is_err());
    }

    #[test]
    fn named_subgroups() {
        let g = make_pair(FamilyId::GammaG, 3, 5).unwrap();
        let mt = g.named_subgroup("M~").unwrap();
        assert_eq!((mt.subgroup.order(), mt.shape), (6, GroupShape::Dihedral(3)));
        let h = make_pair(FamilyId::GammaH, 3, 4).unwrap();
        let nsharp = h.named_subgroup("N#").unwrap();
        assert_eq!(nsharp.subgroup.order(), 4);
        let gp = make_pair(FamilyId::GammaPlusGPlus, 6, 4).unwrap();
        let mplus = gp.named_subgroup("M+").unwrap();
        assert_eq!(mplus.shape, GroupShape::Cyclic(3));
        assert!(matches!(g.named_subgroup("N#"), Err(FamilyError::UnknownSubgroup(_))));
    }

    #[test]
    fn mu_alone_leaves_parity_grid() {
        let gp = make_pair(FamilyId::GammaPlusGPlus, 4, 4).unwrap();
        assert!(matches!(
            gp.grid.realize(&Word::letter(Mu)),
            Err(FamilyError::LeavesVertexSet(_))
        ));
        assert!(gp.grid.realize(&Word::letter(Mu).then(Nu, 1)).is_ok());
    }

    #[test]
    fn words_round_trip_through_text() {
        let w = Word::letter(Tau).then(Sigma, 1).then(Nu, -1);
        assert_eq!(w.to_string(), "tau*sigma*nu^-1");
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert!("rho".parse::<Word>().is_err());
    }

    #[test]
    fn family_ids_parse() {
        assert_eq!("row3".parse::<FamilyId>().unwrap(), FamilyId::GammaH);
        assert_eq!("5".parse::<FamilyId>().unwrap(), FamilyId::Gamma2G2);
        assert!("row6".parse::<FamilyId>().is_err());
    }
}
