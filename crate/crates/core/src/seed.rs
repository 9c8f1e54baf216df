//! Seeds, mutation, components, coproducts and similarity.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, VarId};

/// Default depth for cluster-variable enumeration.
pub const DEFAULT_ENUMERATION_DEPTH: usize = 6;
/// Default node budget for searches over seeds.
pub const DEFAULT_NODE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Pair(VarId, VarId),
    Cycle(Vec<VarId>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair(v, w) => write!(f, "({v}, {w})"),
            Witness::Cycle(c) => {
                let names: Vec<&str> = c.iter().map(VarId::as_str).collect();
                write!(f, "cycle {}", names.join(" -> "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("matrix is not skew-symmetrizable, witness {0}")]
    NotSkewSymmetrizable(Witness),
    #[error("{0} is not exchangeable")]
    NotExchangeable(VarId),
    #[error("unknown label {0}")]
    UnknownLabel(VarId),
    #[error("label {0} occurs twice")]
    DuplicateLabel(VarId),
    #[error("labels {0} and {1} carry the same value")]
    DuplicateValue(VarId, VarId),
    #[error("sequence not admissible at step {index} ({label})")]
    NotAdmissible { index: usize, label: VarId },
    #[error("node budget of {0} exceeded")]
    ResourceLimit(usize),
    #[error("label {0} occurs in more than one summand")]
    LabelCollision(VarId),
    #[error("similarity search exceeded its budget of {0} nodes")]
    SearchBudgetExceeded(usize),
    #[error("matrix entry overflow while mutating at {0}")]
    Overflow(VarId),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Sparse exchange matrix; only nonzero entries are stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    rows: BTreeMap<VarId, BTreeMap<VarId, i64>>,
}

impl ExchangeMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (VarId, VarId, i64)>>(entries: I) -> Self {
        let mut m = Self::new();
        for (v, w, b) in entries {
            m.set(v, w, b);
        }
        m
    }

    pub fn get(&self, v: &VarId, w: &VarId) -> i64 {
        self.rows.get(v).and_then(|r| r.get(w)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: VarId, w: VarId, b: i64) {
        if b == 0 {
            if let Some(row) = self.rows.get_mut(&v) {
                row.remove(&w);
                if row.is_empty() {
                    self.rows.remove(&v);
                }
            }
        } else {
            self.rows.entry(v).or_default().insert(w, b);
        }
    }

    /// Nonzero entries of row `v`.
    pub fn row(&self, v: &VarId) -> impl Iterator<Item = (&VarId, i64)> {
        self.rows
            .get(v)
            .into_iter()
            .flat_map(|r| r.iter().map(|(w, b)| (w, *b)))
    }

    pub fn row_map(&self, v: &VarId) -> BTreeMap<VarId, i64> {
        self.rows.get(v).cloned().unwrap_or_default()
    }

    /// All nonzero entries `(v, w, b_vw)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&VarId, &VarId, i64)> {
        self.rows
            .iter()
            .flat_map(|(v, r)| r.iter().map(move |(w, b)| (v, w, *b)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    /// Labels appearing in some nonzero entry.
    pub fn support(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for (v, w, _) in self.entries() {
            out.insert(v.clone());
            out.insert(w.clone());
        }
        out
    }

    pub fn negated(&self) -> Self {
        ExchangeMatrix::from_entries(self.entries().map(|(v, w, b)| (v.clone(), w.clone(), -b)))
    }

    pub fn restricted(&self, labels: &BTreeSet<VarId>) -> Self {
        ExchangeMatrix::from_entries(
            self.entries()
                .filter(|(v, w, _)| labels.contains(*v) && labels.contains(*w))
                .map(|(v, w, b)| (v.clone(), w.clone(), b)),
        )
    }

    pub fn renamed(&self, map: &BTreeMap<VarId, VarId>) -> Self {
        let r = |v: &VarId| map.get(v).cloned().unwrap_or_else(|| v.clone());
        ExchangeMatrix::from_entries(self.entries().map(|(v, w, b)| (r(v), r(w), b)))
    }
}

impl fmt::Debug for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries()).finish()
    }
}

/// Least positive integer symmetrizer of `b`, per connected component.
///
/// Labels that appear in no entry are not listed.
pub fn check_skew_symmetrizable(b: &ExchangeMatrix) -> Result<BTreeMap<VarId, BigInt>, SeedError> {
    for (v, w, bvw) in b.entries() {
        let bwv = b.get(w, v);
        if v == w || bwv == 0 || (bvw > 0) == (bwv > 0) {
            return Err(SeedError::NotSkewSymmetrizable(Witness::Pair(v.clone(), w.clone())));
        }
    }
    let mut ratio: BTreeMap<VarId, BigRational> = BTreeMap::new();
    let mut parent: BTreeMap<VarId, VarId> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for root in b.support() {
        if ratio.contains_key(&root) {
            continue;
        }
        ratio.insert(root.clone(), BigRational::one());
        let mut component = vec![root.clone()];
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(v) = queue.pop_front() {
            let dv = ratio[&v].clone();
            for (w, bvw) in b.row(&v) {
                // d_v b_vw = -d_w b_wv
                let expected = &dv * BigRational::new(BigInt::from(-bvw), BigInt::from(b.get(w, &v)));
                match ratio.get(w) {
                    Some(dw) if *dw != expected => {
                        let mut cycle = path_to_root(&parent, &v);
                        cycle.reverse();
                        cycle.extend(path_to_root(&parent, w));
                        return Err(SeedError::NotSkewSymmetrizable(Witness::Cycle(cycle)));
                    }
                    Some(_) => {}
                    None => {
                        ratio.insert(w.clone(), expected);
                        parent.insert(w.clone(), v.clone());
                        component.push(w.clone());
                        queue.push_back(w.clone());
                    }
                }
            }
        }
        let lcm = component.iter().fold(BigInt::one(), |acc, v| acc.lcm(ratio[v].denom()));
        let ints: Vec<BigInt> = component
            .iter()
            .map(|v| (ratio[v].clone() * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, d| acc.gcd(d));
        for (v, d) in component.into_iter().zip(ints) {
            out.insert(v, d / &gcd);
        }
    }
    Ok(out)
}

fn path_to_root(parent: &BTreeMap<VarId, VarId>, v: &VarId) -> Vec<VarId> {
    let mut path = vec![v.clone()];
    let mut cur = v;
    while let Some(p) = parent.get(cur) {
        path.push(p.clone());
        cur = p;
    }
    path
}

/// A seed: labeled cluster variables, the exchangeable labels and the
/// exchange matrix.
///
/// Equality compares values, not labels: two seeds are equal when some
/// value-preserving relabeling carries one onto the other.
#[derive(Clone)]
pub struct Seed {
    cluster: BTreeMap<VarId, LaurentPoly>,
    exchangeable: BTreeSet<VarId>,
    matrix: ExchangeMatrix,
}

impl Seed {
    pub fn new(
        cluster: Vec<(VarId, LaurentPoly)>,
        exchangeable: BTreeSet<VarId>,
        matrix: ExchangeMatrix,
    ) -> Result<Self, SeedError> {
        let mut map = BTreeMap::new();
        for (label, value) in cluster {
            if map.contains_key(&label) {
                return Err(SeedError::DuplicateLabel(label));
            }
            map.insert(label, value);
        }
        if let Some(x) = exchangeable.iter().find(|x| !map.contains_key(*x)) {
            return Err(SeedError::UnknownLabel(x.clone()));
        }
        if let Some(x) = matrix.support().into_iter().find(|x| !map.contains_key(x)) {
            return Err(SeedError::UnknownLabel(x));
        }
        check_skew_symmetrizable(&matrix)?;
        let mut seen: HashMap<&LaurentPoly, &VarId> = HashMap::new();
        for (label, value) in &map {
            if let Some(other) = seen.insert(value, label) {
                return Err(SeedError::DuplicateValue(other.clone(), label.clone()));
            }
        }
        Ok(Seed {
            cluster: map,
            exchangeable,
            matrix,
        })
    }

    /// Seed whose values are the labels themselves.
    pub fn initial(
        labels: impl IntoIterator<Item = VarId>,
        exchangeable: BTreeSet<VarId>,
        matrix: ExchangeMatrix,
    ) -> Result<Self, SeedError> {
        let cluster = labels.into_iter().map(|l| (l.clone(), LaurentPoly::var(l))).collect();
        Seed::new(cluster, exchangeable, matrix)
    }

    /// Initial seed from a skew-symmetric arrow list: `(v, w, k)` sets
    /// `b_vw = k` and `b_wv = -k`.
    pub fn from_arrows(
        labels: &[&str],
        exchangeable: &[&str],
        arrows: &[(&str, &str, i64)],
    ) -> Result<Self, SeedError> {
        let mut m = ExchangeMatrix::new();
        for &(v, w, k) in arrows {
            let (v, w) = (VarId::new(v)?, VarId::new(w)?);
            m.set(v.clone(), w.clone(), m.get(&v, &w) + k);
            m.set(w.clone(), v.clone(), m.get(&w, &v) - k);
        }
        let labels = labels.iter().map(|l| VarId::new(l)).collect::<Result<Vec<_>, _>>()?;
        let ex = exchangeable.iter().map(|l| VarId::new(l)).collect::<Result<_, _>>()?;
        Seed::initial(labels, ex, m)
    }

    pub fn empty() -> Self {
        Seed {
            cluster: BTreeMap::new(),
            exchangeable: BTreeSet::new(),
            matrix: ExchangeMatrix::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cluster.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &VarId> {
        self.cluster.keys()
    }

    pub fn label_set(&self) -> BTreeSet<VarId> {
        self.cluster.keys().cloned().collect()
    }

    pub fn cluster(&self) -> impl Iterator<Item = (&VarId, &LaurentPoly)> {
        self.cluster.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.cluster.values()
    }

    pub fn contains(&self, label: &VarId) -> bool {
        self.cluster.contains_key(label)
    }

    pub fn value(&self, label: &VarId) -> Option<&LaurentPoly> {
        self.cluster.get(label)
    }

    /// The label carrying `value`, if any.
    pub fn label_of(&self, value: &LaurentPoly) -> Option<&VarId> {
        self.cluster.iter().find(|(_, v)| *v == value).map(|(l, _)| l)
    }

    pub fn exchangeable(&self) -> &BTreeSet<VarId> {
        &self.exchangeable
    }

    pub fn is_exchangeable(&self, label: &VarId) -> bool {
        self.exchangeable.contains(label)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &VarId> {
        self.cluster.keys().filter(|l| !self.exchangeable.contains(*l))
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn entry(&self, v: &VarId, w: &VarId) -> i64 {
        self.matrix.get(v, w)
    }

    /// Neighbours of `v`: labels `w` with `b_vw != 0`.
    pub fn neighbors(&self, v: &VarId) -> impl Iterator<Item = &VarId> {
        self.matrix.row(v).map(|(w, _)| w)
    }

    /// True if every value is the monomial of its own label.
    pub fn is_initial(&self) -> bool {
        self.cluster.iter().all(|(l, v)| v.as_var() == Some(l))
    }

    /// Least symmetrizer, with isolated labels set to 1.
    pub fn symmetrizer(&self) -> BTreeMap<VarId, BigInt> {
        let mut d = check_skew_symmetrizable(&self.matrix).expect("seed invariant");
        for l in self.cluster.keys() {
            d.entry(l.clone()).or_insert_with(BigInt::one);
        }
        d
    }

    /// Full subseed on `labels` (intersected with the cluster).
    pub fn full_subseed(&self, labels: &BTreeSet<VarId>) -> Seed {
        Seed {
            cluster: self
                .cluster
                .iter()
                .filter(|(l, _)| labels.contains(*l))
                .map(|(l, v)| (l.clone(), v.clone()))
                .collect(),
            exchangeable: self.exchangeable.intersection(labels).cloned().collect(),
            matrix: self.matrix.restricted(labels),
        }
    }

    /// The same seed with a different exchangeable set.
    pub fn with_exchangeable(&self, exchangeable: BTreeSet<VarId>) -> Result<Seed, SeedError> {
        if let Some(x) = exchangeable.iter().find(|x| !self.contains(x)) {
            return Err(SeedError::UnknownLabel(x.clone()));
        }
        Ok(Seed {
            exchangeable,
            ..self.clone()
        })
    }

    /// Renames labels; values are kept. Labels missing from `map` stay.
    pub fn renamed(&self, map: &BTreeMap<VarId, VarId>) -> Result<Seed, SeedError> {
        let r = |v: &VarId| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Seed::new(
            self.cluster.iter().map(|(l, v)| (r(l), v.clone())).collect(),
            self.exchangeable.iter().map(r).collect(),
            self.matrix.renamed(map),
        )
    }

    /// Renames labels and, for an initial seed, the values along with them.
    pub fn relabeled_initial(&self, map: &BTreeMap<VarId, VarId>) -> Result<Seed, SeedError> {
        let r = |v: &VarId| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Seed::initial(
            self.cluster.keys().map(r),
            self.exchangeable.iter().map(r).collect(),
            self.matrix.renamed(map),
        )
    }

    /// Label given to the mutation of `x`: `x'1`, then `x'2`, and so on,
    /// skipping labels already present.
    pub fn fresh_label(&self, x: &VarId) -> VarId {
        fresh_label_avoiding(x, |l| self.contains(l))
    }

    /// Mutation at `x`; returns the new seed and the label of the new variable.
    pub fn mutate(&self, x: &VarId) -> Result<(Seed, VarId), SeedError> {
        if !self.exchangeable.contains(x) {
            return Err(SeedError::NotExchangeable(x.clone()));
        }
        let mut positive = LaurentPoly::one();
        let mut negative = LaurentPoly::one();
        for (v, b) in self.matrix.row(x) {
            let e = u32::try_from(b.unsigned_abs()).map_err(|_| SeedError::Overflow(x.clone()))?;
            let factor = self.cluster[v].pow(e);
            if b > 0 {
                positive = &positive * &factor;
            } else {
                negative = &negative * &factor;
            }
        }
        let new_value = (&positive + &negative).exact_div(&self.cluster[x])?;

        let neighbors: Vec<(VarId, i64)> = self.matrix.row(x).map(|(v, b)| (v.clone(), b)).collect();
        let mut m = self.matrix.clone();
        for (v, _) in &neighbors {
            let bvx = self.matrix.get(v, x);
            for (w, bxw) in &neighbors {
                if v == w {
                    continue;
                }
                let delta = bvx
                    .checked_abs()
                    .and_then(|a| a.checked_mul(*bxw))
                    .zip(bxw.checked_abs().and_then(|a| bvx.checked_mul(a)))
                    .and_then(|(p, q)| p.checked_add(q))
                    .ok_or_else(|| SeedError::Overflow(x.clone()))?;
                if delta != 0 {
                    let updated = self
                        .matrix
                        .get(v, w)
                        .checked_add(delta / 2)
                        .ok_or_else(|| SeedError::Overflow(x.clone()))?;
                    m.set(v.clone(), w.clone(), updated);
                }
            }
        }
        let fresh = self.fresh_label(x);
        for (v, bxv) in &neighbors {
            m.set(x.clone(), v.clone(), 0);
            m.set(v.clone(), x.clone(), 0);
            m.set(fresh.clone(), v.clone(), -bxv);
            m.set(v.clone(), fresh.clone(), -self.matrix.get(v, x));
        }
        let mut cluster = self.cluster.clone();
        cluster.remove(x);
        cluster.insert(fresh.clone(), new_value);
        let mut exchangeable = self.exchangeable.clone();
        exchangeable.remove(x);
        exchangeable.insert(fresh.clone());
        Ok((
            Seed {
                cluster,
                exchangeable,
                matrix: m,
            },
            fresh,
        ))
    }

    /// Mutation along `seq`; also returns where each original label ended up.
    pub fn mutate_along(&self, seq: &[VarId]) -> Result<(Seed, BTreeMap<VarId, VarId>), SeedError> {
        let mut position: BTreeMap<VarId, VarId> = self.cluster.keys().map(|l| (l.clone(), l.clone())).collect();
        let mut current = self.clone();
        for (index, x) in seq.iter().enumerate() {
            if !current.is_exchangeable(x) {
                return Err(SeedError::NotAdmissible {
                    index,
                    label: x.clone(),
                });
            }
            let (next, fresh) = current.mutate(x)?;
            for p in position.values_mut() {
                if p == x {
                    *p = fresh.clone();
                }
            }
            current = next;
        }
        Ok((current, position))
    }

    /// Key identifying the seed up to relabeling: sorted value texts, the
    /// exchangeable positions and the matrix in those positions.
    pub fn canonical_key(&self) -> SeedKey {
        let mut order: Vec<(String, &VarId)> = self.cluster.iter().map(|(l, v)| (v.to_string(), l)).collect();
        order.sort();
        let index: HashMap<&VarId, usize> = order.iter().enumerate().map(|(i, (_, l))| (*l, i)).collect();
        let exchangeable = self
            .exchangeable
            .iter()
            .map(|l| index[l])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut entries: Vec<(usize, usize, i64)> =
            self.matrix.entries().map(|(v, w, b)| (index[v], index[w], b)).collect();
        entries.sort();
        SeedKey {
            values: order.into_iter().map(|(s, _)| s).collect(),
            exchangeable,
            entries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedKey {
    pub values: Vec<String>,
    pub exchangeable: Vec<usize>,
    pub entries: Vec<(usize, usize, i64)>,
}

impl PartialEq for Seed {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len()
            || self.exchangeable.len() != other.exchangeable.len()
            || self.matrix.nnz() != other.matrix.nnz()
        {
            return false;
        }
        let by_value: HashMap<&LaurentPoly, &VarId> = other.cluster.iter().map(|(l, v)| (v, l)).collect();
        let mut phi: HashMap<&VarId, &VarId> = HashMap::new();
        for (l, v) in &self.cluster {
            match by_value.get(v) {
                Some(m) => phi.insert(l, m),
                None => return false,
            };
        }
        self.exchangeable.iter().all(|x| other.exchangeable.contains(phi[x]))
            && self
                .matrix
                .entries()
                .all(|(v, w, b)| other.matrix.get(phi[v], phi[w]) == b)
    }
}

impl Eq for Seed {}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seed")
            .field("cluster", &self.cluster)
            .field("exchangeable", &self.exchangeable)
            .field("matrix", &self.matrix)
            .finish()
    }
}

fn fresh_label_avoiding(x: &VarId, taken: impl Fn(&VarId) -> bool) -> VarId {
    let s = x.as_str();
    let (base, n) = match s.rfind('\'') {
        Some(i) if i + 1 < s.len() && s[i + 1..].bytes().all(|b| b.is_ascii_digit()) => {
            (&s[..i], s[i + 1..].parse::<u64>().unwrap_or(0))
        }
        _ => (s, 0),
    };
    let mut k = n + 1;
    loop {
        let candidate = VarId::new(&format!("{base}'{k}")).expect("primed label stays valid");
        if !taken(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

pub fn mutate_seed(s: &Seed, x: &VarId) -> Result<Seed, SeedError> {
    s.mutate(x).map(|(t, _)| t)
}

/// True iff each step is exchangeable after the preceding ones.
pub fn is_admissible(s: &Seed, seq: &[VarId]) -> bool {
    let mut labels = s.label_set();
    let mut ex = s.exchangeable.clone();
    for x in seq {
        if !ex.remove(x) {
            return false;
        }
        let fresh = fresh_label_avoiding(x, |l| labels.contains(l));
        labels.remove(x);
        labels.insert(fresh.clone());
        ex.insert(fresh);
    }
    true
}

pub fn mutate_sequence(s: &Seed, seq: &[VarId]) -> Result<Seed, SeedError> {
    s.mutate_along(seq).map(|(t, _)| t)
}

/// Breadth-first census of cluster variables up to `depth` mutations.
///
/// Seeds are deduplicated up to relabeling; the budget bounds the number of
/// distinct seeds visited. Values are listed in order of first discovery.
pub fn enumerate_cluster_variables(s: &Seed, depth: usize, node_budget: usize) -> Result<Vec<LaurentPoly>, SeedError> {
    let mut values = Vec::new();
    let mut known: HashSet<LaurentPoly> = HashSet::new();
    let mut seen: HashSet<SeedKey> = HashSet::new();
    for v in s.values() {
        if known.insert(v.clone()) {
            values.push(v.clone());
        }
    }
    seen.insert(s.canonical_key());
    if seen.len() > node_budget {
        return Err(SeedError::ResourceLimit(node_budget));
    }
    let mut frontier = vec![s.clone()];
    for _ in 0..depth {
        let children: Vec<Result<Vec<(Seed, VarId)>, SeedError>> = frontier
            .par_iter()
            .map(|t| t.exchangeable.iter().map(|x| t.mutate(x)).collect())
            .collect();
        let mut next = Vec::new();
        for batch in children {
            for (child, fresh) in batch? {
                if !seen.insert(child.canonical_key()) {
                    continue;
                }
                if seen.len() > node_budget {
                    return Err(SeedError::ResourceLimit(node_budget));
                }
                let v = &child.cluster[&fresh];
                if known.insert(v.clone()) {
                    values.push(v.clone());
                }
                next.push(child);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(values)
}

fn union_find_parts(labels: &BTreeSet<VarId>, edges: impl Iterator<Item = (VarId, VarId)>) -> Vec<BTreeSet<VarId>> {
    let index: BTreeMap<&VarId, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (v, w) in edges {
        if let (Some(&a), Some(&b)) = (index.get(&v), index.get(&w)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut parts: BTreeMap<usize, BTreeSet<VarId>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        let r = find(&mut parent, i);
        parts.entry(r).or_default().insert(l.clone());
    }
    parts.into_values().collect()
}

/// Partition of the labels into connected pieces, as full subseeds ordered
/// by least label.
pub fn connected_components(s: &Seed) -> Vec<Seed> {
    connected_component_labels(s)
        .iter()
        .map(|p| s.full_subseed(p))
        .collect()
}

pub fn connected_component_labels(s: &Seed) -> Vec<BTreeSet<VarId>> {
    union_find_parts(
        &s.label_set(),
        s.matrix.entries().map(|(v, w, _)| (v.clone(), w.clone())),
    )
}

/// Label sets of the exchangeably connected components, ordered by least
/// exchangeable member. Exchangeable labels are partitioned; a coefficient
/// belongs to every component it is adjacent to, and to none if it has no
/// exchangeable neighbour.
pub fn exchangeable_component_labels(s: &Seed) -> Vec<BTreeSet<VarId>> {
    let mut done: BTreeSet<&VarId> = BTreeSet::new();
    let mut out = Vec::new();
    for x in &s.exchangeable {
        if done.contains(x) {
            continue;
        }
        let mut comp = BTreeSet::from([x.clone()]);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(v) = queue.pop_front() {
            for w in s.neighbors(&v) {
                if comp.insert(w.clone()) && s.is_exchangeable(w) {
                    queue.push_back(w.clone());
                }
            }
        }
        done.extend(comp.iter().filter_map(|v| s.exchangeable.get(v)));
        out.push(comp);
    }
    out
}

pub fn exchangeably_connected_components(s: &Seed) -> Vec<Seed> {
    exchangeable_component_labels(s)
        .iter()
        .map(|p| s.full_subseed(p))
        .collect()
}

/// Disjoint union with block-diagonal matrix.
pub fn coproduct(seeds: &[Seed]) -> Result<Seed, SeedError> {
    let mut cluster = Vec::new();
    let mut labels = BTreeSet::new();
    let mut exchangeable = BTreeSet::new();
    let mut matrix = ExchangeMatrix::new();
    for s in seeds {
        for (l, v) in &s.cluster {
            if !labels.insert(l.clone()) {
                return Err(SeedError::LabelCollision(l.clone()));
            }
            cluster.push((l.clone(), v.clone()));
        }
        exchangeable.extend(s.exchangeable.iter().cloned());
        for (v, w, b) in s.matrix.entries() {
            matrix.set(v.clone(), w.clone(), b);
        }
    }
    Seed::new(cluster, exchangeable, matrix)
}

pub fn opposite_seed(s: &Seed) -> Seed {
    Seed {
        matrix: s.matrix.negated(),
        ..s.clone()
    }
}

/// Outcome of a similarity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Similarity {
    Similar(BTreeMap<VarId, VarId>),
    NotSimilar,
}

/// Searches for a bijection `s -> t` taking exchangeables to exchangeables
/// under which every exchangeably connected component of `s` maps onto a
/// component of `t` either isomorphically or onto its opposite.
pub fn check_similar(s: &Seed, t: &Seed, node_budget: usize) -> Result<Similarity, SeedError> {
    if s.len() != t.len() || s.exchangeable.len() != t.exchangeable.len() {
        return Ok(Similarity::NotSimilar);
    }
    let comps_s = exchangeable_component_labels(s);
    let comps_t = exchangeable_component_labels(t);
    if comps_s.len() != comps_t.len() {
        return Ok(Similarity::NotSimilar);
    }
    let mut search = SimilaritySearch {
        s,
        t,
        comps_s: comps_s.iter().map(|c| bfs_order(s, c)).collect(),
        comps_t,
        phi: BTreeMap::new(),
        used: BTreeSet::new(),
        matched: vec![false; comps_s.len()],
        nodes: 0,
        budget: node_budget,
    };
    if !search.components(0)? {
        return Ok(Similarity::NotSimilar);
    }
    let mut phi = search.phi;
    let rest_t: Vec<&VarId> = t.labels().filter(|l| !search.used.contains(*l)).collect();
    let rest_s: Vec<&VarId> = s.labels().filter(|l| !phi.contains_key(*l)).collect();
    for (a, b) in rest_s.into_iter().zip(rest_t) {
        phi.insert(a.clone(), b.clone());
    }
    Ok(Similarity::Similar(phi))
}

fn bfs_order(s: &Seed, comp: &BTreeSet<VarId>) -> Vec<VarId> {
    let start = comp
        .iter()
        .find(|l| s.is_exchangeable(l))
        .unwrap_or_else(|| comp.first().unwrap());
    let mut order = vec![start.clone()];
    let mut seen = BTreeSet::from([start.clone()]);
    let mut i = 0;
    while i < order.len() {
        let v = order[i].clone();
        for w in s.neighbors(&v) {
            if comp.contains(w) && seen.insert(w.clone()) {
                order.push(w.clone());
            }
        }
        i += 1;
    }
    for l in comp {
        if seen.insert(l.clone()) {
            order.push(l.clone());
        }
    }
    order
}

struct SimilaritySearch<'a> {
    s: &'a Seed,
    t: &'a Seed,
    comps_s: Vec<Vec<VarId>>,
    comps_t: Vec<BTreeSet<VarId>>,
    phi: BTreeMap<VarId, VarId>,
    used: BTreeSet<VarId>,
    matched: Vec<bool>,
    nodes: usize,
    budget: usize,
}

impl SimilaritySearch<'_> {
    fn tick(&mut self) -> Result<(), SeedError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(SeedError::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn components(&mut self, ci: usize) -> Result<bool, SeedError> {
        if ci == self.comps_s.len() {
            return Ok(true);
        }
        let size = self.comps_s[ci].len();
        let ex_count = self.comps_s[ci].iter().filter(|l| self.s.is_exchangeable(l)).count();
        for tj in 0..self.comps_t.len() {
            if self.matched[tj]
                || self.comps_t[tj].len() != size
                || self.comps_t[tj].iter().filter(|l| self.t.is_exchangeable(l)).count() != ex_count
            {
                continue;
            }
            self.matched[tj] = true;
            for sign in [1, -1] {
                if self.labels(ci, tj, sign, 0)? {
                    return Ok(true);
                }
            }
            self.matched[tj] = false;
        }
        Ok(false)
    }

    fn labels(&mut self, ci: usize, tj: usize, sign: i64, k: usize) -> Result<bool, SeedError> {
        if k == self.comps_s[ci].len() {
            return self.components(ci + 1);
        }
        self.tick()?;
        let v = self.comps_s[ci][k].clone();
        if let Some(w) = self.phi.get(&v).cloned() {
            if self.comps_t[tj].contains(&w) && self.consistent(ci, tj, sign, k, &w) {
                return self.labels(ci, tj, sign, k + 1);
            }
            return Ok(false);
        }
        let mut candidates: Vec<VarId> = self.comps_t[tj]
            .iter()
            .filter(|w| !self.used.contains(*w))
            .cloned()
            .collect();
        if let Some(pos) = candidates.iter().position(|w| *w == v) {
            let same = candidates.remove(pos);
            candidates.insert(0, same);
        }
        for w in candidates {
            if self.s.is_exchangeable(&v) != self.t.is_exchangeable(&w) || !self.consistent(ci, tj, sign, k, &w) {
                continue;
            }
            self.phi.insert(v.clone(), w.clone());
            self.used.insert(w.clone());
            if self.labels(ci, tj, sign, k + 1)? {
                return Ok(true);
            }
            self.phi.remove(&v);
            self.used.remove(&w);
        }
        Ok(false)
    }

    /// Checks `v = comps_s[ci][k] -> w` against earlier labels of the component.
    fn consistent(&self, ci: usize, tj: usize, sign: i64, k: usize, w: &VarId) -> bool {
        let comp = &self.comps_s[ci];
        let v = &comp[k];
        let degree_s = self.s.neighbors(v).filter(|u| comp.contains(u)).count();
        let degree_t = self.t.neighbors(w).filter(|u| self.comps_t[tj].contains(*u)).count();
        if degree_s != degree_t {
            return false;
        }
        comp[..k].iter().all(|u| {
            let pu = &self.phi[u];
            self.t.entry(w, pu) == sign * self.s.entry(v, u) && self.t.entry(pu, w) == sign * self.s.entry(u, v)
        })
    }
}

/// Direct check that `phi` is a similarity from `s` to `t`.
pub fn verify_similarity(s: &Seed, t: &Seed, phi: &BTreeMap<VarId, VarId>) -> bool {
    let image: BTreeSet<&VarId> = phi.values().collect();
    if phi.len() != s.len()
        || image.len() != t.len()
        || !s.labels().all(|l| phi.get(l).is_some_and(|w| t.contains(w)))
        || !s.labels().all(|l| s.is_exchangeable(l) == t.is_exchangeable(&phi[l]))
    {
        return false;
    }
    let comps_t = exchangeable_component_labels(t);
    exchangeable_component_labels(s).iter().all(|comp| {
        let mapped: BTreeSet<VarId> = comp.iter().map(|l| phi[l].clone()).collect();
        comps_t.contains(&mapped)
            && [1, -1].iter().any(|sign| {
                comp.iter()
                    .all(|v| comp.iter().all(|w| t.entry(&phi[v], &phi[w]) == sign * s.entry(v, w)))
            })
    })
}
