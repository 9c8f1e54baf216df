//! Lazily described seeds of possibly infinite rank, their filtrations by
//! finite full subseeds, and computations that stabilise along them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{LaurentPoly, VarId};
use crate::morphism::{
    check_cm3, check_no_specialization_conditions, compose, ClusterMap, Image, MorphismError, VerificationReport,
};
use crate::seed::{connected_component_labels, coproduct, ExchangeMatrix, Seed, SeedError};
use crate::triangulation::{seed_from_arcs, triangulation_components, Arc, InfiniteTriangulation, TriangulationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("oracle is inconsistent: {0}")]
    OracleInconsistent(String),
    #[error("{0} is not a variable of the oracle")]
    UnknownVariable(VarId),
    #[error("{0} is exchangeable but has a neighbour outside the subseed")]
    NotOnlyCoefficients(VarId),
    #[error("not a full subseed: {0} differs")]
    NotFullSubseed(VarId),
    #[error("sequence is not admissible in stage {stage}")]
    NotAdmissibleAtStage { stage: usize },
    #[error("cone is incompatible at {label} between stages {stage} and {next}")]
    IncompatibleCone { label: VarId, stage: usize, next: usize },
    #[error("filtration law fails: {0}")]
    LawViolated(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Triangulation(Box<TriangulationError>),
}

impl From<TriangulationError> for ColimitError {
    fn from(e: TriangulationError) -> Self {
        ColimitError::Triangulation(Box::new(e))
    }
}

/// A seed given by local queries. Answers must not change between calls.
pub trait SeedOracle: Sync {
    fn contains(&self, v: &VarId) -> bool;
    /// Nonzero entries of the row of `v`.
    fn neighbors(&self, v: &VarId) -> Result<BTreeMap<VarId, i64>, ColimitError>;
    fn is_exchangeable(&self, v: &VarId) -> Result<bool, ColimitError>;
    /// Base variable of the `j`-th connected component, if there is one.
    fn representative(&self, j: usize) -> Option<VarId>;
}

/// A finite seed viewed as an oracle; components are listed by least label.
pub struct FiniteSeedOracle {
    seed: Seed,
    reps: Vec<VarId>,
}

impl FiniteSeedOracle {
    pub fn new(seed: Seed) -> Self {
        let mut reps: Vec<VarId> = connected_component_labels(&seed)
            .into_iter()
            .filter_map(|c| c.into_iter().next())
            .collect();
        reps.sort();
        FiniteSeedOracle { seed, reps }
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }
}

impl SeedOracle for FiniteSeedOracle {
    fn contains(&self, v: &VarId) -> bool {
        self.seed.contains(v)
    }

    fn neighbors(&self, v: &VarId) -> Result<BTreeMap<VarId, i64>, ColimitError> {
        if !self.seed.contains(v) {
            return Err(ColimitError::UnknownVariable(v.clone()));
        }
        Ok(self.seed.matrix().row_map(v))
    }

    fn is_exchangeable(&self, v: &VarId) -> Result<bool, ColimitError> {
        if !self.seed.contains(v) {
            return Err(ColimitError::UnknownVariable(v.clone()));
        }
        Ok(self.seed.is_exchangeable(v))
    }

    fn representative(&self, j: usize) -> Option<VarId> {
        self.reps.get(j).cloned()
    }
}

/// The quiver `… → x_{-1} → x_0 → x_1 → …` with every vertex exchangeable.
/// Vertex `n` is named `{prefix}{n}` for `n >= 0` and `{prefix}m{-n}` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathQuiver {
    prefix: String,
}

impl PathQuiver {
    pub fn new(prefix: &str) -> Result<Self, ColimitError> {
        VarId::new(&format!("{prefix}0"))
            .map_err(|_| ColimitError::OracleInconsistent(format!("bad prefix {prefix:?}")))?;
        Ok(PathQuiver {
            prefix: prefix.to_string(),
        })
    }

    pub fn label(&self, n: i64) -> VarId {
        let name = if n >= 0 {
            format!("{}{n}", self.prefix)
        } else {
            format!("{}m{}", self.prefix, -n)
        };
        VarId::new(&name).expect("validated prefix")
    }

    pub fn index(&self, v: &VarId) -> Option<i64> {
        let rest = v.as_str().strip_prefix(&self.prefix)?;
        let (neg, digits) = match rest.strip_prefix('m') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || (digits.len() > 1 && digits.starts_with('0'))
        {
            return None;
        }
        let n: i64 = digits.parse().ok()?;
        match (neg, n) {
            (true, 0) => None,
            (true, n) => Some(-n),
            (false, n) => Some(n),
        }
    }
}

impl Default for PathQuiver {
    fn default() -> Self {
        PathQuiver { prefix: "x".into() }
    }
}

impl SeedOracle for PathQuiver {
    fn contains(&self, v: &VarId) -> bool {
        self.index(v).is_some()
    }

    fn neighbors(&self, v: &VarId) -> Result<BTreeMap<VarId, i64>, ColimitError> {
        let n = self.index(v).ok_or_else(|| ColimitError::UnknownVariable(v.clone()))?;
        Ok(BTreeMap::from([(self.label(n + 1), 1), (self.label(n - 1), -1)]))
    }

    fn is_exchangeable(&self, v: &VarId) -> Result<bool, ColimitError> {
        self.index(v)
            .map(|_| true)
            .ok_or_else(|| ColimitError::UnknownVariable(v.clone()))
    }

    fn representative(&self, j: usize) -> Option<VarId> {
        (j == 0).then(|| self.label(0))
    }
}

/// Disjoint union of oracles with disjoint variable names. Representatives
/// are taken from the parts in round-robin order.
pub struct UnionOracle {
    parts: Vec<Box<dyn SeedOracle>>,
}

impl UnionOracle {
    pub fn new(parts: Vec<Box<dyn SeedOracle>>) -> Self {
        UnionOracle { parts }
    }

    fn part(&self, v: &VarId) -> Result<&dyn SeedOracle, ColimitError> {
        self.parts
            .iter()
            .find(|p| p.contains(v))
            .map(|p| p.as_ref())
            .ok_or_else(|| ColimitError::UnknownVariable(v.clone()))
    }
}

impl SeedOracle for UnionOracle {
    fn contains(&self, v: &VarId) -> bool {
        self.parts.iter().any(|p| p.contains(v))
    }

    fn neighbors(&self, v: &VarId) -> Result<BTreeMap<VarId, i64>, ColimitError> {
        self.part(v)?.neighbors(v)
    }

    fn is_exchangeable(&self, v: &VarId) -> Result<bool, ColimitError> {
        self.part(v)?.is_exchangeable(v)
    }

    fn representative(&self, j: usize) -> Option<VarId> {
        let mut seen = 0;
        for k in 0.. {
            let mut any = false;
            for p in &self.parts {
                if let Some(r) = p.representative(k) {
                    any = true;
                    if seen == j {
                        return Some(r);
                    }
                    seen += 1;
                }
            }
            if !any {
                return None;
            }
        }
        None
    }
}

/// Neighbours of a label and whether it is exchangeable.
type Row = (BTreeMap<VarId, i64>, bool);

/// The seed of an infinite triangulation, queried through finite windows.
/// Each answer is computed in two windows and must agree.
pub struct TriangulationOracle {
    it: InfiniteTriangulation,
    reps: Vec<Arc>,
    cache: Mutex<BTreeMap<VarId, Row>>,
}

impl TriangulationOracle {
    pub fn new(it: InfiniteTriangulation) -> Result<Self, ColimitError> {
        it.validate()?;
        let reps = if it.roots.is_empty() {
            let mut reps: Vec<Arc> = triangulation_components(&it, it.base_window())?
                .into_iter()
                .filter_map(|part| part.into_iter().next())
                .collect();
            reps.sort();
            reps
        } else {
            it.roots.clone()
        };
        Ok(TriangulationOracle {
            it,
            reps,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn triangulation(&self) -> &InfiniteTriangulation {
        &self.it
    }

    pub fn roots(&self) -> &[Arc] {
        &self.reps
    }

    fn query(&self, v: &VarId) -> Result<(BTreeMap<VarId, i64>, bool), ColimitError> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(v) {
            return Ok(hit.clone());
        }
        let arc = Arc::from_label(v).map_err(|_| ColimitError::UnknownVariable(v.clone()))?;
        let (row, ex) = self
            .it
            .arc_neighbors(&arc)
            .map_err(|_| ColimitError::UnknownVariable(v.clone()))?;
        let (row2, ex2) = self.it.arc_neighbors_in(&arc, 1)?;
        if row != row2 || ex != ex2 {
            return Err(ColimitError::OracleInconsistent(format!(
                "neighbours of {arc} change with the window"
            )));
        }
        let out = (row.into_iter().map(|(a, b)| (a.label(), b)).collect(), ex);
        self.cache.lock().expect("cache lock").insert(v.clone(), out.clone());
        Ok(out)
    }
}

impl SeedOracle for TriangulationOracle {
    fn contains(&self, v: &VarId) -> bool {
        self.query(v).is_ok()
    }

    fn neighbors(&self, v: &VarId) -> Result<BTreeMap<VarId, i64>, ColimitError> {
        self.query(v).map(|(row, _)| row)
    }

    fn is_exchangeable(&self, v: &VarId) -> Result<bool, ColimitError> {
        self.query(v).map(|(_, ex)| ex)
    }

    fn representative(&self, j: usize) -> Option<VarId> {
        self.reps.get(j).map(Arc::label)
    }
}

/// Full initial seed on `labels`, reading rows and exchangeability from the
/// oracle; only labels in `exchangeable` are marked exchangeable.
fn restricted_seed(
    o: &dyn SeedOracle,
    labels: &BTreeSet<VarId>,
    exchangeable: BTreeSet<VarId>,
) -> Result<Seed, ColimitError> {
    let mut m = ExchangeMatrix::new();
    let mut rows: BTreeMap<&VarId, BTreeMap<VarId, i64>> = BTreeMap::new();
    for v in labels {
        rows.insert(v, o.neighbors(v)?);
    }
    for (v, row) in &rows {
        for (w, b) in row {
            if !labels.contains(w) {
                continue;
            }
            let back = rows[w].get(*v).copied().unwrap_or(0);
            if back == 0 || back.signum() == b.signum() {
                return Err(ColimitError::OracleInconsistent(format!(
                    "entries at {v}, {w} are {b} and {back}"
                )));
            }
            m.set((*v).clone(), w.clone(), *b);
        }
    }
    Seed::initial(labels.iter().cloned(), exchangeable, m).map_err(|e| ColimitError::OracleInconsistent(e.to_string()))
}

/// Ball of the given radius around `center`; the variables inside the
/// previous radius that are exchangeable in the oracle are exchangeable.
pub fn materialize_ball(o: &dyn SeedOracle, center: &VarId, radius: usize) -> Result<Seed, ColimitError> {
    if !o.contains(center) {
        return Err(ColimitError::UnknownVariable(center.clone()));
    }
    let mut inner: BTreeSet<VarId> = BTreeSet::new();
    let mut cluster = BTreeSet::from([center.clone()]);
    let mut shell = cluster.clone();
    for _ in 0..radius {
        let mut next = BTreeSet::new();
        for v in &shell {
            for w in o.neighbors(v)?.into_keys() {
                if !cluster.contains(&w) {
                    next.insert(w);
                }
            }
        }
        inner = cluster.clone();
        cluster.extend(next.iter().cloned());
        shell = next;
    }
    let mut ex = BTreeSet::new();
    for v in inner {
        if o.is_exchangeable(&v)? {
            ex.insert(v);
        }
    }
    restricted_seed(o, &cluster, ex)
}

/// Stage `i`: component `j <= i` contributes its ball of radius `i - j`.
pub fn build_stage(o: &dyn SeedOracle, i: usize) -> Result<Seed, ColimitError> {
    let balls = (0..=i)
        .map_while(|j| o.representative(j).map(|r| (j, r)))
        .map(|(j, r)| materialize_ball(o, &r, i - j))
        .collect::<Result<Vec<_>, _>>()?;
    coproduct(&balls).map_err(|e| ColimitError::OracleInconsistent(format!("components overlap: {e}")))
}

/// Witness label where `inner` is not a full subseed of `outer`.
fn full_subseed_witness(inner: &Seed, outer: &Seed) -> Option<VarId> {
    for (l, v) in inner.cluster() {
        if outer.value(l) != Some(v) || (inner.is_exchangeable(l) && !outer.is_exchangeable(l)) {
            return Some(l.clone());
        }
        for w in inner.labels() {
            if inner.entry(l, w) != outer.entry(l, w) {
                return Some(l.clone());
            }
        }
    }
    None
}

/// `Ok(None)` if every label of `inner` with a neighbour outside it is a
/// coefficient of `inner`; otherwise the least offending label.
pub fn check_only_coefficients(inner: &Seed, outer: &Seed) -> Result<Option<VarId>, ColimitError> {
    if let Some(l) = full_subseed_witness(inner, outer) {
        return Err(ColimitError::NotFullSubseed(l));
    }
    Ok(inner
        .exchangeable()
        .iter()
        .find(|x| outer.neighbors(x).any(|w| !inner.contains(w)))
        .cloned())
}

/// Like [`check_only_coefficients`] against the whole oracle seed.
pub fn check_only_coefficients_in(inner: &Seed, o: &dyn SeedOracle) -> Result<Option<VarId>, ColimitError> {
    for x in inner.exchangeable() {
        if !o.is_exchangeable(x)? {
            return Err(ColimitError::NotFullSubseed(x.clone()));
        }
        if o.neighbors(x)?.keys().any(|w| !inner.contains(w)) {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// The inclusion of a subseed connected only by coefficients, checked
/// against the conditions for morphisms without specializations.
pub fn inclusion_morphism(inner: &Seed, outer: &Seed) -> Result<ClusterMap, ColimitError> {
    if let Some(x) = check_only_coefficients(inner, outer)? {
        return Err(ColimitError::NotOnlyCoefficients(x));
    }
    let assignment = inner.labels().map(|l| (l.clone(), Image::Var(l.clone()))).collect();
    let m = ClusterMap::new(inner.clone(), outer.clone(), assignment)?;
    let report = check_no_specialization_conditions(&m, 0, 1)?;
    if !report.passed() {
        return Err(ColimitError::LawViolated(format!(
            "inclusion fails the morphism conditions: {report:?}"
        )));
    }
    Ok(m)
}

/// Finite stages with the inclusions between consecutive ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub stages: Vec<Seed>,
    pub inclusions: Vec<ClusterMap>,
}

impl Filtration {
    /// Inclusions from `stages` after checking every law.
    pub fn from_stages(stages: Vec<Seed>) -> Result<Self, ColimitError> {
        let inclusions = stages
            .par_windows(2)
            .map(|w| inclusion_morphism(&w[0], &w[1]))
            .collect::<Result<Vec<_>, _>>()?;
        let fil = Filtration { stages, inclusions };
        fil.check_linear_laws()?;
        Ok(fil)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn last(&self) -> Option<&Seed> {
        self.stages.last()
    }

    /// Composite of the stored inclusions from stage `i` to stage `j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<ClusterMap, ColimitError> {
        let mut m = ClusterMap::identity(&self.stages[i])?;
        for k in i..j {
            m = compose(&self.inclusions[k], &m)?;
        }
        Ok(m)
    }

    /// `f_jk ∘ f_ij = f_ik` and `f_ii = id` for all stored stages.
    pub fn check_linear_laws(&self) -> Result<(), ColimitError> {
        let n = self.stages.len();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (i..n).flat_map(move |j| (j..n).map(move |k| (i, j, k))))
            .collect();
        triples.par_iter().try_for_each(|&(i, j, k)| {
            let lhs = compose(&self.composite(j, k)?, &self.composite(i, j)?)?;
            let direct = inclusion_morphism(&self.stages[i], &self.stages[k])?;
            if lhs != direct || self.composite(i, k)? != direct {
                return Err(ColimitError::LawViolated(format!("f_{j}{k} ∘ f_{i}{j} != f_{i}{k}")));
            }
            Ok(())
        })
    }
}

/// The first `steps` stages of the ball filtration of the oracle, checked
/// against the oracle and the filtration laws.
pub fn build_filtration(o: &dyn SeedOracle, steps: usize) -> Result<Filtration, ColimitError> {
    let stages = (0..steps)
        .into_par_iter()
        .map(|i| build_stage(o, i))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &stages {
        if let Some(x) = check_only_coefficients_in(s, o)? {
            return Err(ColimitError::NotOnlyCoefficients(x));
        }
    }
    Filtration::from_stages(stages)
}

/// Triangulations grown from the roots by adding every arc that shares a
/// triangle with an arc already present, one component entering per stage.
pub fn triangulation_filtration(it: &InfiniteTriangulation, steps: usize) -> Result<Filtration, ColimitError> {
    let oracle = TriangulationOracle::new(it.clone())?;
    let mut grown: Vec<Vec<BTreeSet<Arc>>> = Vec::new();
    let mut stages = Vec::new();
    for i in 0..steps {
        if let Some(root) = oracle.roots().get(i) {
            grown.push(vec![BTreeSet::from([root.clone()])]);
        }
        let mut parts = Vec::new();
        for tower in &grown {
            parts.push(tower.last().expect("nonempty tower").clone());
        }
        let seeds: Vec<Seed> = parts.iter().map(seed_from_arcs).collect();
        stages
            .push(coproduct(&seeds).map_err(|e| ColimitError::OracleInconsistent(format!("components overlap: {e}")))?);
        for tower in grown.iter_mut() {
            let last = tower.last().expect("nonempty tower");
            let mut next = last.clone();
            for a in last {
                for b in oracle.neighbors(&a.label())?.keys() {
                    next.insert(Arc::from_label(b)?);
                }
            }
            tower.push(next);
        }
    }
    for s in &stages {
        if let Some(x) = check_only_coefficients_in(s, &oracle)? {
            return Err(ColimitError::NotOnlyCoefficients(x));
        }
    }
    Filtration::from_stages(stages)
}

/// Value of a mutation computed in a finite stage, with the stage index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableValue {
    pub value: LaurentPoly,
    pub stage: usize,
}

/// Resolves each step to a current label: a label of the current seed is
/// taken as is, otherwise it names the variable now sitting at that
/// original position. Returns the seed and the position map.
pub fn mutate_positions(s: &Seed, seq: &[VarId]) -> Result<(Seed, BTreeMap<VarId, VarId>), SeedError> {
    let mut position: BTreeMap<VarId, VarId> = s.labels().map(|l| (l.clone(), l.clone())).collect();
    let mut current = s.clone();
    for (index, step) in seq.iter().enumerate() {
        let x = if current.contains(step) {
            step.clone()
        } else {
            position.get(step).cloned().ok_or(SeedError::NotAdmissible {
                index,
                label: step.clone(),
            })?
        };
        if !current.is_exchangeable(&x) {
            return Err(SeedError::NotAdmissible {
                index,
                label: step.clone(),
            });
        }
        let (next, fresh) = current.mutate(&x)?;
        for p in position.values_mut() {
            if *p == x {
                *p = fresh.clone();
            }
        }
        current = next;
    }
    Ok((current, position))
}

fn value_at(stage: &Seed, seq: &[VarId], target: &VarId) -> Option<LaurentPoly> {
    if !stage.contains(target) {
        return None;
    }
    let (s, pos) = mutate_positions(stage, seq).ok()?;
    s.value(&pos[target]).cloned()
}

/// Mutation of the oracle seed along `seq` (given by positions), read at the
/// position `target`: computed in the least stage where the sequence is
/// admissible, and confirmed in the next stage.
pub fn stable_mutation(
    o: &dyn SeedOracle,
    seq: &[VarId],
    target: &VarId,
    max_stages: usize,
) -> Result<StableValue, ColimitError> {
    let mut current = build_stage(o, 0)?;
    for i in 0..max_stages {
        let next = build_stage(o, i + 1)?;
        if let Some(value) = value_at(&current, seq, target) {
            let again = value_at(&next, seq, target);
            if again.as_ref() != Some(&value) {
                return Err(ColimitError::OracleInconsistent(format!(
                    "value changes between stages {i} and {}",
                    i + 1
                )));
            }
            return Ok(StableValue { value, stage: i });
        }
        current = next;
    }
    Err(ColimitError::NotAdmissibleAtStage {
        stage: max_stages.saturating_sub(1),
    })
}

/// The map out of the last stage determined by a compatible cone.
/// `cone[i]` must start at stage `i`; all must share one target.
pub fn mediating_morphism(
    fil: &Filtration,
    cone: &[ClusterMap],
    depth: usize,
    node_budget: usize,
) -> Result<(ClusterMap, VerificationReport), ColimitError> {
    if cone.len() != fil.stages.len() || fil.stages.is_empty() {
        return Err(ColimitError::LawViolated("cone needs one map per stage".into()));
    }
    for (i, g) in cone.iter().enumerate() {
        if *g.source() != fil.stages[i] || g.target() != cone[0].target() {
            return Err(ColimitError::LawViolated(format!(
                "cone map {i} has the wrong source or target"
            )));
        }
    }
    for i in 0..cone.len() - 1 {
        for x in fil.stages[i].labels() {
            if cone[i + 1].image(x) != cone[i].image(x) {
                return Err(ColimitError::IncompatibleCone {
                    label: x.clone(),
                    stage: i,
                    next: i + 1,
                });
            }
        }
    }
    let last = fil.stages.len() - 1;
    let mut assignment = BTreeMap::new();
    for x in fil.stages[last].labels() {
        let first = (0..=last)
            .find(|&i| fil.stages[i].contains(x))
            .expect("present in the last stage");
        assignment.insert(x.clone(), cone[first].image(x).expect("total assignment").clone());
    }
    let h = ClusterMap::new(fil.stages[last].clone(), cone[0].target().clone(), assignment)?;
    let report = check_cm3(&h, depth, node_budget)?;
    Ok((h, report))
}
