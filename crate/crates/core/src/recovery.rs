//! Hierarchy structures and hierarchical erasure recovery.
//!
//! A structure has `H` levels numbered `1..=H`; level 1 has the largest
//! supports. At each level the supports partition the positions, and each
//! support carries the repair groups lying inside it. A repair group is a set
//! of positions on which every codeword restricts to a polynomial of bounded
//! degree in a per-position abscissa, so any `deg + 1` unerased symbols
//! determine the rest.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeFamily, EvaluationCode};
use crate::fiber::FiberIndex;
use crate::geometry::{self, all_directions, flag_through, flat_points, FlagPolicy, Flat, GeometryError, Point};
use crate::gf::FieldElement;
use crate::linalg;
use crate::rm::{rm_hierarchy_params, RmError, RmSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoveryError {
    #[error("degree v={v} leaves no redundancy on lines of size q={q}; local recovery needs v <= q-2")]
    DegreeTooHighForRecovery { v: u32, q: u32 },
    #[error("bad direction order: {0}")]
    BadOrder(String),
    #[error("operation needs a {expected} code")]
    WrongFamily { expected: &'static str },
    #[error("need {need} unerased symbols, have {have}")]
    NotEnoughSymbols { need: usize, have: usize },
    #[error("repair group {members:?} of degree {degree} cannot repair any erasure")]
    DegenerateGroup { members: Vec<usize>, degree: usize },
    #[error("flats through different points do not partition the space at level {level}")]
    NotPartition { level: usize },
    #[error("unrecoverable erasures remain at {:?}", .report.residual)]
    Unrecoverable { report: Box<RecoveryReport>, partial: Box<ErasureWord> },
    #[error(transparent)]
    Rm(#[from] RmError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Positions that restrict to a polynomial of degree `<= degree` in the
/// per-member `abscissae`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairGroup {
    pub members: Vec<usize>,
    pub abscissae: Vec<FieldElement>,
    pub degree: usize,
    /// Line direction index (colex) for RM, factor index for fiber codes.
    pub direction: usize,
    /// Deepest level whose supports contain the group.
    pub level: usize,
}

impl RepairGroup {
    /// Largest number of erasures the group can repair.
    pub fn capacity(&self) -> usize {
        self.members.len() - self.degree - 1
    }
}

/// Declared parameters of one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelParams {
    pub n: u64,
    pub s: u64,
    pub delta: u64,
    /// Repair groups per position inside the level support.
    pub t: u64,
    /// For RM structures, the commonly quoted `(q^(m+1-j) - 1)/(q - 1)`,
    /// which exceeds the within-flat count.
    pub t_printed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HierarchyKind {
    Rm { dims: Vec<usize>, policy: FlagPolicy },
    Fiber { order: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
struct Level {
    params: LevelParams,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    /// Group ids inside each block, in peeling order.
    block_groups: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyStructure {
    pub n: usize,
    pub kind: HierarchyKind,
    levels: Vec<Level>,
    groups: Vec<RepairGroup>,
}

fn peel_order(groups: &[RepairGroup], ids: &mut [usize]) {
    ids.sort_by_key(|&g| (std::cmp::Reverse(groups[g].level), groups[g].direction, groups[g].members[0]));
}

impl HierarchyStructure {
    /// Assembles a structure from per-level partitions and the raw groups
    /// of each level's blocks.
    fn assemble(
        n: usize,
        kind: HierarchyKind,
        partitions: Vec<(LevelParams, Vec<usize>, Vec<Vec<usize>>)>,
        mut raw: Vec<RepairGroup>,
    ) -> Result<Self, RecoveryError> {
        for g in raw.iter_mut() {
            if g.members.len() < g.degree + 2 {
                return Err(RecoveryError::DegenerateGroup { members: g.members.clone(), degree: g.degree });
            }
            let m0 = g.members[0];
            g.level = (0..partitions.len())
                .rev()
                .find(|&j| g.members.iter().all(|&x| partitions[j].1[x] == partitions[j].1[m0]))
                .map_or(0, |j| j + 1);
        }
        let levels = partitions
            .into_iter()
            .enumerate()
            .map(|(j, (params, block_of, blocks))| {
                let mut block_groups = vec![Vec::new(); blocks.len()];
                for (id, g) in raw.iter().enumerate() {
                    if g.level > j {
                        block_groups[block_of[g.members[0]]].push(id);
                    }
                }
                for ids in block_groups.iter_mut() {
                    peel_order(&raw, ids);
                }
                Level { params, block_of, blocks, block_groups }
            })
            .collect();
        Ok(HierarchyStructure { n, kind, levels, groups: raw })
    }

    /// Number of levels `H`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn params(&self) -> Vec<LevelParams> {
        self.levels.iter().map(|l| l.params).collect()
    }

    fn level(&self, j: usize) -> &Level {
        assert!(j >= 1 && j <= self.levels.len(), "level {j} out of range");
        &self.levels[j - 1]
    }

    /// `(I_j)_i`, including `i`, ascending.
    pub fn support(&self, i: usize, j: usize) -> &[usize] {
        let l = self.level(j);
        &l.blocks[l.block_of[i]]
    }

    pub fn groups(&self) -> &[RepairGroup] {
        &self.groups
    }

    /// Repair groups usable when peeling inside the level-`j` support of
    /// `owner`, in peeling order.
    pub fn scope_groups(&self, owner: usize, j: usize) -> impl Iterator<Item = &RepairGroup> {
        let l = self.level(j);
        l.block_groups[l.block_of[owner]].iter().map(|&g| &self.groups[g])
    }

    /// Repair groups through position `i` inside its level-`j` support.
    pub fn groups_through(&self, i: usize, j: usize) -> Vec<&RepairGroup> {
        self.scope_groups(i, j).filter(|g| g.members.contains(&i)).collect()
    }

    /// Positions `i` and levels `j` where `(I_(j+1))_i` is not inside
    /// `(I_j)_i` or `i` is missing from its own support.
    pub fn nesting_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 1..=self.depth() {
                let sup = self.support(i, j);
                let nested = j == self.depth() || self.support(i, j + 1).iter().all(|x| sup.binary_search(x).is_ok());
                if !nested || sup.binary_search(&i).is_err() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Descriptions of groups that leave their support or overlap another
    /// group through the same position outside that position.
    pub fn group_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 1..=self.depth() {
            let l = self.level(j);
            for (b, ids) in l.block_groups.iter().enumerate() {
                for &g in ids {
                    if self.groups[g].members.iter().any(|&x| l.block_of[x] != b) {
                        out.push(format!("level {j}: group {g} leaves its support"));
                    }
                }
            }
            for i in 0..self.n {
                let through = self.groups_through(i, j);
                for (a, g1) in through.iter().enumerate() {
                    for g2 in &through[a + 1..] {
                        if g1.members.iter().any(|x| *x != i && g2.members.contains(x)) {
                            out.push(format!("level {j}: groups through {i} overlap"));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Builds nested flat supports for an RM code: each position gets a flag of
/// flats of the given dimensions; the repair groups at a level are the lines
/// inside the level's flats, of degree `v`.
pub fn build_rm_hierarchy(
    code: &EvaluationCode,
    dims: Option<&[usize]>,
    policy: FlagPolicy,
) -> Result<HierarchyStructure, RecoveryError> {
    let CodeFamily::ReedMuller { v, m } = code.family else {
        return Err(RecoveryError::WrongFamily { expected: "Reed-Muller" });
    };
    let field = &code.field;
    let q = field.q();
    if v + 1 >= q {
        return Err(RecoveryError::DegreeTooHighForRecovery { v, q });
    }
    let spec = RmSpec::new(field.clone(), v, m)?;
    let dims: Vec<usize> = dims.map_or_else(|| spec.default_dims(), <[usize]>::to_vec);
    let ladder = rm_hierarchy_params(&spec, Some(&dims))?;
    let points = code.affine_points().ok_or(RecoveryError::WrongFamily { expected: "Reed-Muller" })?;
    let pos: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let dir_index: HashMap<Vec<FieldElement>, usize> =
        all_directions(field, m).enumerate().map(|(i, d)| (d, i)).collect();

    let flags: Vec<_> =
        points.iter().map(|p| flag_through(field, p, &dims, policy)).collect::<Result<_, GeometryError>>()?;
    let mut partitions = Vec::new();
    let mut raw = Vec::new();
    for (j, lp) in ladder.iter().enumerate() {
        let mut ids: HashMap<&Flat, usize> = HashMap::new();
        let mut flats: Vec<&Flat> = Vec::new();
        let mut block_of = vec![usize::MAX; code.n];
        for (i, flag) in flags.iter().enumerate() {
            let flat = &flag.chain[j];
            let id = *ids.entry(flat).or_insert_with(|| {
                flats.push(flat);
                flats.len() - 1
            });
            block_of[i] = id;
        }
        let mut blocks = Vec::with_capacity(flats.len());
        for (id, flat) in flats.iter().enumerate() {
            let mut members: Vec<usize> = flat_points(field, flat).iter().map(|p| pos[p]).collect();
            members.sort_unstable();
            if members.iter().any(|&x| block_of[x] != id) {
                return Err(RecoveryError::NotPartition { level: j + 1 });
            }
            blocks.push(members);
            // Every line of the flat, grouped by parallel class.
            let origin = &flat.base;
            for line in geometry::lines_in_flat_through(field, origin, flat)? {
                for l in geometry::parallel_partition(field, flat, &line)? {
                    let pts = flat_points(field, &l);
                    let mut pairs: Vec<(usize, FieldElement)> =
                        pts.iter().map(|p| (pos[p], l.chart(field, p)[0])).collect();
                    pairs.sort_unstable();
                    raw.push(RepairGroup {
                        members: pairs.iter().map(|x| x.0).collect(),
                        abscissae: pairs.iter().map(|x| x.1).collect(),
                        degree: v as usize,
                        direction: dir_index[&l.basis[0]],
                        level: 0,
                    });
                }
            }
        }
        let d = lp.dim as u32;
        let params = LevelParams {
            n: lp.n,
            s: lp.s,
            delta: lp.delta,
            t: ((q as u64).pow(d) - 1) / (q as u64 - 1),
            t_printed: Some(((q as u64).pow(m as u32 - j as u32) - 1) / (q as u64 - 1)),
        };
        partitions.push((params, block_of, blocks));
    }
    // Lines of a deeper flat also appear among the lines of the flats above.
    raw.sort_by(|a, b| a.members.cmp(&b.members));
    raw.dedup_by(|a, b| a.members == b.members);
    HierarchyStructure::assemble(code.n, HierarchyKind::Rm { dims, policy }, partitions, raw)
}

/// Builds fiber supports: level `j` of position `i` collects the positions
/// agreeing with `i` outside directions `order[j-1..]`, and its repair groups
/// are the recovery supports in those directions.
pub fn build_fiber_hierarchy(code: &EvaluationCode, order: &[usize]) -> Result<HierarchyStructure, RecoveryError> {
    let (Some(spec), Some(points)) = (code.fiber_spec(), code.curve_points()) else {
        return Err(RecoveryError::WrongFamily { expected: "fiber" });
    };
    let t = spec.t();
    if order.is_empty() {
        return Err(RecoveryError::BadOrder("at least one direction is required".into()));
    }
    for (a, &k) in order.iter().enumerate() {
        if k >= t {
            return Err(RecoveryError::BadOrder(format!("direction {k} out of range for {t} factors")));
        }
        if order[..a].contains(&k) {
            return Err(RecoveryError::BadOrder(format!("direction {k} repeated")));
        }
    }
    let degrees = spec.degrees();
    let index = FiberIndex::new(points, t);
    let h = order.len();
    let mut partitions = Vec::with_capacity(h);
    for j in 0..h {
        let dirs = &order[j..];
        let mut ids: HashMap<Vec<FieldElement>, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(code.n);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, pt) in points.iter().enumerate() {
            let key: Vec<FieldElement> = pt
                .coords()
                .into_iter()
                .enumerate()
                .filter(|(c, _)| *c == 0 || !dirs.contains(&(c - 1)))
                .map(|(_, x)| x)
                .collect();
            let next = blocks.len();
            let id = *ids.entry(key).or_insert(next);
            if id == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[id].push(i);
            block_of.push(id);
        }
        let prod = |f: &dyn Fn(usize) -> u64| dirs.iter().map(|&k| f(k)).product::<u64>();
        let params = LevelParams {
            n: prod(&|k| degrees[k] as u64),
            s: prod(&|k| (degrees[k] - spec.rho[k] + 1) as u64),
            delta: prod(&|k| spec.rho[k] as u64),
            t: (h - j) as u64,
            t_printed: None,
        };
        partitions.push((params, block_of, blocks));
    }
    let mut raw = Vec::new();
    for &k in order {
        for members in &index.groups[k] {
            raw.push(RepairGroup {
                members: members.clone(),
                abscissae: members.iter().map(|&i| points[i].fibers[k]).collect(),
                degree: (degrees[k] - spec.rho[k]) as usize,
                direction: k,
                level: 0,
            });
        }
    }
    HierarchyStructure::assemble(code.n, HierarchyKind::Fiber { order: order.to_vec() }, partitions, raw)
}

/// Default structure for a code: all flat levels for RM (deterministic
/// flags), or every direction in factor order for fiber codes.
pub fn default_hierarchy(code: &EvaluationCode) -> Result<HierarchyStructure, RecoveryError> {
    match &code.family {
        CodeFamily::ReedMuller { .. } => build_rm_hierarchy(code, None, FlagPolicy::Deterministic),
        CodeFamily::Fiber(spec) => build_fiber_hierarchy(code, &(0..spec.t()).collect::<Vec<_>>()),
    }
}

/// A received word; erased positions hold no trusted value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasureWord {
    pub values: Vec<FieldElement>,
    pub mask: Vec<bool>,
}

impl ErasureWord {
    pub fn new(codeword: &[FieldElement], erased: &[usize]) -> ErasureWord {
        let mut w = ErasureWord { values: codeword.to_vec(), mask: vec![false; codeword.len()] };
        for &i in erased {
            w.erase(i);
        }
        w
    }

    pub fn erase(&mut self, i: usize) {
        self.mask[i] = true;
        self.values[i] = FieldElement::ZERO;
    }

    pub fn fill(&mut self, i: usize, value: FieldElement) {
        self.mask[i] = false;
        self.values[i] = value;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn erasures(&self) -> Vec<usize> {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn get(&self, i: usize) -> Option<FieldElement> {
        (!self.mask[i]).then_some(self.values[i])
    }
}

/// Interpolates through the first `degree + 1` unerased members and returns
/// `(member index, value)` for every erased member.
pub fn interpolate_erased(
    field: &crate::gf::FieldSpec,
    abscissae: &[FieldElement],
    values: &[Option<FieldElement>],
    degree: usize,
) -> Result<Vec<(usize, FieldElement)>, RecoveryError> {
    let known: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).take(degree + 1).collect();
    if known.len() < degree + 1 {
        return Err(RecoveryError::NotEnoughSymbols { need: degree + 1, have: known.len() });
    }
    let xs: Vec<FieldElement> = known.iter().map(|&i| abscissae[i]).collect();
    let ys: Vec<FieldElement> = known.iter().map(|&i| values[i].unwrap()).collect();
    Ok((0..values.len())
        .filter(|&i| values[i].is_none())
        .map(|i| (i, linalg::lagrange_eval(field, &xs, &ys, abscissae[i])))
        .collect())
}

/// One repair: the erasures of a group filled from `read`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairEvent {
    /// Level whose scope the repair ran in; 0 for the global solve.
    pub level: usize,
    pub direction: Option<usize>,
    pub group: Vec<usize>,
    pub recovered: Vec<usize>,
    pub read: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub success: bool,
    pub events: Vec<RepairEvent>,
    pub symbols_accessed: usize,
    pub peeling_rounds: usize,
    pub residual: Vec<usize>,
}

impl RecoveryReport {
    fn push(&mut self, event: RepairEvent) {
        self.symbols_accessed += event.read.len();
        self.peeling_rounds += usize::from(event.level > 0);
        self.events.push(event);
    }

    /// `(position, level)` for every recovered position, in repair order.
    pub fn recovered_levels(&self) -> Vec<(usize, usize)> {
        self.events.iter().flat_map(|e| e.recovered.iter().map(move |&p| (p, e.level))).collect()
    }
}

/// Restricts peeling to one support and optionally forbids reading from a
/// set of positions.
#[derive(Debug, Clone, Copy, Default)]
pub struct Scope<'a> {
    /// Peel only inside this position's support; all supports if `None`.
    pub owner: Option<usize>,
    /// Groups reading any of these positions are skipped.
    pub avoid: Option<&'a [usize]>,
}

/// Peels at level `j` to a fixpoint: repeatedly repairs the first group (in
/// peeling order) with between 1 and `capacity` erasures.
pub fn peel_level(
    field: &crate::gf::FieldSpec,
    word: &mut ErasureWord,
    structure: &HierarchyStructure,
    j: usize,
    scope: Scope<'_>,
) -> RecoveryReport {
    let mut report = RecoveryReport::default();
    let mut candidates: Vec<&RepairGroup> = match scope.owner {
        Some(owner) => structure.scope_groups(owner, j).collect(),
        None => {
            let l = structure.level(j);
            let mut ids: Vec<usize> = l.block_groups.iter().flatten().copied().collect();
            peel_order(&structure.groups, &mut ids);
            ids.into_iter().map(|g| &structure.groups[g]).collect()
        }
    };
    if let Some(avoid) = scope.avoid {
        candidates.retain(|g| !g.members.iter().any(|x| avoid.contains(x) && !word.mask[*x]));
    }
    loop {
        let next = candidates.iter().find(|g| {
            let e = g.members.iter().filter(|&&x| word.mask[x]).count();
            e >= 1 && e <= g.capacity()
        });
        let Some(g) = next else { break };
        let values: Vec<Option<FieldElement>> = g.members.iter().map(|&x| word.get(x)).collect();
        let filled = interpolate_erased(field, &g.abscissae, &values, g.degree).expect("capacity checked");
        let read: Vec<usize> = g.members.iter().copied().filter(|&x| !word.mask[x]).take(g.degree + 1).collect();
        let recovered: Vec<usize> = filled.iter().map(|&(k, _)| g.members[k]).collect();
        for &(k, val) in &filled {
            word.fill(g.members[k], val);
        }
        report.push(RepairEvent { level: j, direction: Some(g.direction), group: g.members.clone(), recovered, read });
    }
    report.residual = word.erasures();
    report.success = report.residual.is_empty();
    report
}

/// Exact erasure decoding: succeeds iff the unerased generator columns have
/// full rank, in which case every erasure is refilled.
pub fn solve_erasures_ml(code: &EvaluationCode, word: &ErasureWord) -> Option<ErasureWord> {
    let known: Vec<usize> = (0..word.len()).filter(|&i| !word.mask[i]).collect();
    if linalg::column_rank(&code.field, &code.generator, &known) != code.k {
        return None;
    }
    let sub: linalg::Matrix = code.generator.iter().map(|row| known.iter().map(|&c| row[c]).collect()).collect();
    let target: Vec<FieldElement> = known.iter().map(|&i| word.values[i]).collect();
    let msg = linalg::solve_left(&code.field, &sub, &target)?;
    let full = code.encode(&msg);
    Some(ErasureWord { values: full, mask: vec![false; word.len()] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    All,
    Position(usize),
}

/// Recovers each erased target by peeling inside its level-`H` support,
/// escalating towards level 1, then (if `fallback`) solving globally.
///
/// With `fallback` set, a failed global solve is an error; without it, the
/// report is returned with `success == false`.
pub fn hierarchical_recover(
    code: &EvaluationCode,
    word: &ErasureWord,
    structure: &HierarchyStructure,
    target: Target,
    fallback: bool,
) -> Result<(ErasureWord, RecoveryReport), RecoveryError> {
    let mut w = word.clone();
    let mut report = RecoveryReport::default();
    let targets: Vec<usize> = match target {
        Target::All => word.erasures(),
        Target::Position(i) => vec![i],
    };
    for &i in &targets {
        for j in (1..=structure.depth()).rev() {
            if !w.mask[i] {
                break;
            }
            let delta = peel_level(&code.field, &mut w, structure, j, Scope { owner: Some(i), avoid: None });
            for e in delta.events {
                report.push(e);
            }
        }
    }
    let pending = |w: &ErasureWord| targets.iter().any(|&i| w.mask[i]);
    if pending(&w) && fallback {
        let erased = w.erasures();
        match solve_erasures_ml(code, &w) {
            Some(full) => {
                let read = (0..w.len()).filter(|&i| !w.mask[i]).collect();
                report.push(RepairEvent { level: 0, direction: None, group: Vec::new(), recovered: erased, read });
                w = full;
            }
            None => {
                report.residual = w.erasures();
                return Err(RecoveryError::Unrecoverable { report: Box::new(report), partial: Box::new(w) });
            }
        }
    }
    report.residual = w.erasures();
    report.success = !pending(&w);
    Ok((w, report))
}
