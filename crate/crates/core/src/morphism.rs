//! Candidate maps between rooted cluster algebras and their verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Monomial, VarId};
use crate::seed::{
    check_similar, enumerate_cluster_variables, exchangeable_component_labels, verify_similarity, Seed, SeedError,
    SeedKey, Similarity,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("assignment mentions {0}, which is not a source label")]
    UnknownSourceLabel(VarId),
    #[error("assignment sends a variable to {0}, which is not a target label")]
    UnknownTargetLabel(VarId),
    #[error("no image assigned to {0}")]
    NotTotal(VarId),
    #[error("the source seed must be an initial seed (values equal to labels)")]
    NonInitialSource,
    #[error("image of {0} is not a Laurent polynomial in the target")]
    NonLaurentImage(LaurentPoly),
    #[error("declared image {image} of {value} is inconsistent with the assignment")]
    InvalidDeclaredImage { value: LaurentPoly, image: LaurentPoly },
    #[error("source of the outer map differs from the target of the inner map")]
    SeedMismatch,
    #[error("the seeds are not similar via the given bijection")]
    NotSimilar,
    #[error("{0} is specialized to an integer")]
    HasSpecialization(VarId),
    #[error("{0} is not biadmissible")]
    NotBiadmissible(String),
    #[error("image of {0} is neither an integer nor a cluster variable of the mutated target")]
    InducedNotCluster(VarId),
    #[error("search stopped after visiting {0} nodes")]
    ResourceLimit(usize),
}

/// Image of a single cluster variable: a target label or an integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Image {
    Var(VarId),
    Int(BigInt),
}

impl fmt::Display for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Var(v) => write!(f, "{v}"),
            Image::Int(n) => write!(f, "{n}"),
        }
    }
}

/// A map from the cluster of `source` to the cluster of `target` together
/// with the integers, extended to Laurent polynomials by substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    source: Seed,
    target: Seed,
    assignment: BTreeMap<VarId, Image>,
    substitution: BTreeMap<VarId, LaurentPoly>,
    declared: BTreeMap<LaurentPoly, LaurentPoly>,
}

impl ClusterMap {
    /// Builds a map out of an initial seed. Every source label needs an image.
    pub fn new(source: Seed, target: Seed, assignment: BTreeMap<VarId, Image>) -> Result<Self, MorphismError> {
        if !source.is_initial() {
            return Err(MorphismError::NonInitialSource);
        }
        check_assignment(&source, &target, &assignment)?;
        let substitution = assignment
            .iter()
            .map(|(x, img)| {
                let value = match img {
                    Image::Var(w) => target.value(w).expect("checked label").clone(),
                    Image::Int(n) => LaurentPoly::constant(n.clone()),
                };
                (x.clone(), value)
            })
            .collect();
        Ok(ClusterMap {
            source,
            target,
            assignment,
            substitution,
            declared: BTreeMap::new(),
        })
    }

    /// Convenience constructor from `(source label, target label)` pairs and
    /// `(source label, integer)` pairs.
    pub fn from_pairs(
        source: Seed,
        target: Seed,
        vars: &[(&str, &str)],
        ints: &[(&str, i64)],
    ) -> Result<Self, MorphismError> {
        let mut assignment = BTreeMap::new();
        for (x, w) in vars {
            assignment.insert(VarId::new(x)?, Image::Var(VarId::new(w)?));
        }
        for (x, n) in ints {
            assignment.insert(VarId::new(x)?, Image::Int(BigInt::from(*n)));
        }
        ClusterMap::new(source, target, assignment)
    }

    pub fn identity(s: &Seed) -> Result<Self, MorphismError> {
        let assignment = s.labels().map(|l| (l.clone(), Image::Var(l.clone()))).collect();
        ClusterMap::new(s.clone(), s.clone(), assignment)
    }

    /// Records images of elements whose denominators are sent to zero. Each
    /// declared image `d` of `n / m` must satisfy `f(n) = f(m) * d`.
    pub fn with_declared_images(mut self, images: Vec<(LaurentPoly, LaurentPoly)>) -> Result<Self, MorphismError> {
        for (value, image) in images {
            let (num, den) = value.split_denominator();
            let fnum = self.substitute_polynomial(&num)?;
            let fden = self.substitute_monomial(&den)?;
            if fnum != &fden * &image {
                return Err(MorphismError::InvalidDeclaredImage { value, image });
            }
            self.declared.insert(value, image);
        }
        Ok(self)
    }

    pub fn source(&self) -> &Seed {
        &self.source
    }

    pub fn target(&self) -> &Seed {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<VarId, Image> {
        &self.assignment
    }

    pub fn image(&self, x: &VarId) -> Option<&Image> {
        self.assignment.get(x)
    }

    pub fn declared_images(&self) -> &BTreeMap<LaurentPoly, LaurentPoly> {
        &self.declared
    }

    pub fn has_specializations(&self) -> bool {
        self.assignment.values().any(|i| matches!(i, Image::Int(_)))
    }

    fn substitute_polynomial(&self, p: &LaurentPoly) -> Result<LaurentPoly, MorphismError> {
        if let Some(v) = p.variables().into_iter().find(|v| !self.substitution.contains_key(v)) {
            return Err(MorphismError::UnknownSourceLabel(v));
        }
        Ok(p.substitute_polynomial(&self.substitution))
    }

    fn substitute_monomial(&self, m: &Monomial) -> Result<LaurentPoly, MorphismError> {
        let mut out = LaurentPoly::one();
        for (v, e) in m.iter() {
            let img = self
                .substitution
                .get(v)
                .ok_or_else(|| MorphismError::UnknownSourceLabel(v.clone()))?;
            out = &out * &img.pow(e.unsigned_abs() as u32);
        }
        Ok(out)
    }

    /// The ring extension of the map applied to a Laurent polynomial in the
    /// source's ambient variables.
    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly, MorphismError> {
        if let Some(d) = self.declared.get(p) {
            return Ok(d.clone());
        }
        let (num, den) = p.split_denominator();
        let fnum = self.substitute_polynomial(&num)?;
        let fden = self.substitute_monomial(&den)?;
        fnum.exact_div(&fden)
            .map_err(|_| MorphismError::NonLaurentImage(p.clone()))
    }

    /// Current target label holding `apply(value)` if it is exchangeable there.
    fn exchangeable_image(&self, target: &Seed, value: &LaurentPoly) -> Result<Option<VarId>, MorphismError> {
        let img = self.apply(value)?;
        if img.as_constant().is_some() {
            return Ok(None);
        }
        Ok(target.label_of(&img).filter(|w| target.is_exchangeable(w)).cloned())
    }

    /// The map between the seeds mutated along a biadmissible sequence.
    pub fn induced(&self, seq: &[VarId]) -> Result<ClusterMap, MorphismError> {
        let mut source = self.source.clone();
        let mut target = self.target.clone();
        for x in seq {
            let value = source
                .value(x)
                .ok_or_else(|| MorphismError::NotBiadmissible(label_list(seq)))?
                .clone();
            if !source.is_exchangeable(x) {
                return Err(MorphismError::NotBiadmissible(label_list(seq)));
            }
            let w = self
                .exchangeable_image(&target, &value)?
                .ok_or_else(|| MorphismError::NotBiadmissible(label_list(seq)))?;
            source = source.mutate(x)?.0;
            target = target.mutate(&w)?.0;
        }
        let mut assignment = BTreeMap::new();
        for (y, value) in source.cluster() {
            let img = self.apply(value)?;
            let image = match img.as_constant() {
                Some(n) => Image::Int(n),
                None => Image::Var(
                    target
                        .label_of(&img)
                        .ok_or_else(|| MorphismError::InducedNotCluster(y.clone()))?
                        .clone(),
                ),
            };
            assignment.insert(y.clone(), image);
        }
        Ok(ClusterMap {
            source,
            target,
            assignment,
            substitution: self.substitution.clone(),
            declared: self.declared.clone(),
        })
    }
}

fn check_assignment(source: &Seed, target: &Seed, assignment: &BTreeMap<VarId, Image>) -> Result<(), MorphismError> {
    if let Some(x) = assignment.keys().find(|x| !source.contains(x)) {
        return Err(MorphismError::UnknownSourceLabel(x.clone()));
    }
    if let Some(x) = source.labels().find(|x| !assignment.contains_key(*x)) {
        return Err(MorphismError::NotTotal(x.clone()));
    }
    for img in assignment.values() {
        if let Image::Var(w) = img {
            if !target.contains(w) {
                return Err(MorphismError::UnknownTargetLabel(w.clone()));
            }
        }
    }
    Ok(())
}

pub fn label_list(seq: &[VarId]) -> String {
    let parts: Vec<&str> = seq.iter().map(VarId::as_str).collect();
    format!("({})", parts.join(", "))
}

/// Outcome of the first two axioms; CM1 holds for every well-formed map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub cm1: bool,
    /// Exchangeable source labels sent to coefficients of the target.
    pub cm2_witnesses: Vec<VarId>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.cm1 && self.cm2_witnesses.is_empty()
    }
}

pub fn check_cm1_cm2(m: &ClusterMap) -> AxiomCheck {
    let cm2_witnesses = m
        .source
        .exchangeable()
        .iter()
        .filter(|x| matches!(&m.assignment[*x], Image::Var(w) if !m.target.is_exchangeable(w)))
        .cloned()
        .collect();
    AxiomCheck {
        cm1: true,
        cm2_witnesses,
    }
}

/// One biadmissible sequence with both mutated seeds and the positions of
/// the original labels.
#[derive(Debug, Clone)]
struct BiNode {
    seq: Vec<VarId>,
    image_seq: Vec<VarId>,
    source: Seed,
    target: Seed,
    source_pos: BTreeMap<VarId, VarId>,
    target_pos: BTreeMap<VarId, VarId>,
    /// Original source labels in the order their positions were first mutated.
    touched: Vec<VarId>,
}

fn relabel(pos: &mut BTreeMap<VarId, VarId>, from: &VarId, to: &VarId) -> Option<VarId> {
    let mut hit = None;
    for (orig, p) in pos.iter_mut() {
        if p == from {
            *p = to.clone();
            hit = Some(orig.clone());
        }
    }
    hit
}

impl BiNode {
    fn root(m: &ClusterMap) -> Self {
        let ident = |s: &Seed| s.labels().map(|l| (l.clone(), l.clone())).collect();
        BiNode {
            seq: Vec::new(),
            image_seq: Vec::new(),
            source: m.source.clone(),
            target: m.target.clone(),
            source_pos: ident(&m.source),
            target_pos: ident(&m.target),
            touched: Vec::new(),
        }
    }

    fn children(&self, m: &ClusterMap) -> Result<Vec<BiNode>, MorphismError> {
        let mut out = Vec::new();
        for x in self.source.exchangeable() {
            let value = self.source.value(x).expect("exchangeable labels are in the cluster");
            let Some(w) = m.exchangeable_image(&self.target, value)? else {
                continue;
            };
            let (source, fresh) = self.source.mutate(x)?;
            let (target, fresh_w) = self.target.mutate(&w)?;
            let mut child = BiNode {
                seq: self.seq.iter().chain([x]).cloned().collect(),
                image_seq: self.image_seq.iter().chain([&w]).cloned().collect(),
                source,
                target,
                source_pos: self.source_pos.clone(),
                target_pos: self.target_pos.clone(),
                touched: self.touched.clone(),
            };
            if let Some(orig) = relabel(&mut child.source_pos, x, &fresh) {
                if !child.touched.contains(&orig) {
                    child.touched.push(orig);
                }
            }
            relabel(&mut child.target_pos, &w, &fresh_w);
            out.push(child);
        }
        Ok(out)
    }
}

/// Breadth-first levels of biadmissible sequences, lengths `1..=depth`.
fn biadmissible_levels(m: &ClusterMap, depth: usize, node_budget: usize) -> Result<Vec<Vec<BiNode>>, MorphismError> {
    let mut levels: Vec<Vec<BiNode>> = Vec::new();
    let mut frontier = vec![BiNode::root(m)];
    let mut visited = 1usize;
    for _ in 0..depth {
        let next: Vec<Vec<BiNode>> = frontier.par_iter().map(|n| n.children(m)).collect::<Result<_, _>>()?;
        let next: Vec<BiNode> = next.into_iter().flatten().collect();
        visited += next.len();
        if visited > node_budget {
            return Err(MorphismError::ResourceLimit(visited));
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.clone());
        frontier = next;
    }
    Ok(levels)
}

/// Nonempty biadmissible sequences of length at most `depth`, shortest first.
pub fn enumerate_biadmissible(
    m: &ClusterMap,
    depth: usize,
    node_budget: usize,
) -> Result<Vec<Vec<VarId>>, MorphismError> {
    Ok(biadmissible_levels(m, depth, node_budget)?
        .into_iter()
        .flatten()
        .map(|n| n.seq)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub sequence: Vec<VarId>,
    pub variable: VarId,
    /// `f(mu_seq(y))`.
    pub lhs: LaurentPoly,
    /// `mu_f(seq)(f(y))`.
    pub rhs: LaurentPoly,
}

impl Counterexample {
    /// Recomputes both sides; true iff they still differ as recorded.
    pub fn replays(&self, m: &ClusterMap) -> bool {
        let Ok((source, pos)) = m.source.mutate_along(&self.sequence) else {
            return false;
        };
        let Ok(node) = replay_images(m, &self.sequence) else {
            return false;
        };
        let Some(Image::Var(w)) = m.image(&self.variable) else {
            return false;
        };
        let Ok((target, tpos)) = m.target.mutate_along(&node) else {
            return false;
        };
        let lhs = source.value(&pos[&self.variable]).map(|v| m.apply(v));
        let rhs = target.value(&tpos[w]).cloned();
        matches!(lhs, Some(Ok(l)) if l == self.lhs) && rhs.as_ref() == Some(&self.rhs) && self.lhs != self.rhs
    }
}

fn replay_images(m: &ClusterMap, seq: &[VarId]) -> Result<Vec<VarId>, MorphismError> {
    let mut source = m.source.clone();
    let mut target = m.target.clone();
    let mut out = Vec::new();
    for x in seq {
        let value = source
            .value(x)
            .ok_or_else(|| MorphismError::NotBiadmissible(label_list(seq)))?
            .clone();
        let w = m
            .exchangeable_image(&target, &value)?
            .ok_or_else(|| MorphismError::NotBiadmissible(label_list(seq)))?;
        source = source.mutate(x)?.0;
        target = target.mutate(&w)?.0;
        out.push(w);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cm3Outcome {
    VerifiedToDepth(usize),
    Counterexample(Counterexample),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub axioms: AxiomCheck,
    pub cm3: Cm3Outcome,
    pub depth: usize,
    pub sequences_checked: usize,
    pub nodes_visited: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed() && matches!(self.cm3, Cm3Outcome::VerifiedToDepth(_))
    }
}

fn check_node(m: &ClusterMap, node: &BiNode) -> Result<Option<Counterexample>, MorphismError> {
    let mut order = node.touched.clone();
    order.extend(m.source.labels().filter(|l| !node.touched.contains(l)).cloned());
    for y in order {
        let Image::Var(w) = &m.assignment[&y] else {
            continue;
        };
        let lhs = m.apply(node.source.value(&node.source_pos[&y]).expect("tracked position"))?;
        let rhs = node
            .target
            .value(&node.target_pos[w])
            .expect("tracked position")
            .clone();
        if lhs != rhs {
            return Ok(Some(Counterexample {
                sequence: node.seq.clone(),
                variable: y,
                lhs,
                rhs,
            }));
        }
    }
    Ok(None)
}

/// Checks the axioms, and that the map commutes with mutation along every
/// biadmissible sequence of length at most `depth`. The first counterexample
/// in breadth-first order is reported.
pub fn check_cm3(m: &ClusterMap, depth: usize, node_budget: usize) -> Result<VerificationReport, MorphismError> {
    let levels = biadmissible_levels(m, depth, node_budget)?;
    let nodes: Vec<&BiNode> = levels.iter().flatten().collect();
    let found = nodes
        .par_iter()
        .map(|n| check_node(m, n))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .next();
    let cm3 = match found {
        Some(c) => Cm3Outcome::Counterexample(c),
        None => Cm3Outcome::VerifiedToDepth(depth),
    };
    Ok(VerificationReport {
        axioms: check_cm1_cm2(m),
        cm3,
        depth,
        sequences_checked: nodes.len(),
        nodes_visited: nodes.len() + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionWitness {
    /// An exchangeable variable sent to a coefficient.
    NotExchangeable(VarId),
    /// Two labels with the same image, at least one of them exchangeable.
    Collision(VarId, VarId),
    /// Coefficients `x`, `y` with one image and an exchangeable common
    /// neighbour `z` of opposite signs after mutating along `sequence`.
    SignConflict {
        sequence: Vec<VarId>,
        z: VarId,
        x: VarId,
        y: VarId,
        bzx: i64,
        bzy: i64,
    },
    /// Row of `y` does not match the image row with either sign.
    RowMismatch { component: BTreeSet<VarId>, y: VarId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    Pass,
    Fail(ConditionWitness),
    Inconclusive,
}

impl Condition {
    pub fn is_pass(&self) -> bool {
        matches!(self, Condition::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSpecializationReport {
    pub injective: Condition,
    pub coefficients: Condition,
    pub rows: Condition,
    /// Sign per exchangeably connected component of the image seed.
    pub signs: Vec<(BTreeSet<VarId>, i64)>,
}

impl NoSpecializationReport {
    pub fn passed(&self) -> bool {
        self.injective.is_pass() && self.coefficients.is_pass() && self.rows.is_pass()
    }
}

/// The three conditions characterizing rooted cluster morphisms without
/// specializations. The sign condition on coefficient pairs is searched
/// over admissible sequences of length at most `depth` unless the rows of
/// the pair agree on exchangeable columns.
pub fn check_no_specialization_conditions(
    m: &ClusterMap,
    depth: usize,
    node_budget: usize,
) -> Result<NoSpecializationReport, MorphismError> {
    let mut image: BTreeMap<VarId, VarId> = BTreeMap::new();
    for (x, img) in &m.assignment {
        match img {
            Image::Var(w) => image.insert(x.clone(), w.clone()),
            Image::Int(_) => return Err(MorphismError::HasSpecialization(x.clone())),
        };
    }
    let s = &m.source;
    let ex = s.exchangeable();

    let injective = match ex.iter().find(|x| !m.target.is_exchangeable(&image[*x])) {
        Some(x) => Condition::Fail(ConditionWitness::NotExchangeable(x.clone())),
        None => {
            let mut seen: BTreeMap<&VarId, &VarId> = BTreeMap::new();
            ex.iter()
                .find_map(|x| {
                    seen.insert(&image[x], x)
                        .map(|y| ConditionWitness::Collision(y.clone(), x.clone()))
                })
                .map_or(Condition::Pass, Condition::Fail)
        }
    };

    let mut pairs = Vec::new();
    let mut collision = None;
    let labels: Vec<&VarId> = s.labels().collect();
    for (i, x) in labels.iter().enumerate() {
        for y in &labels[i + 1..] {
            if image[*x] == image[*y] {
                if ex.contains(*x) || ex.contains(*y) {
                    collision.get_or_insert(ConditionWitness::Collision((*x).clone(), (*y).clone()));
                } else {
                    pairs.push(((*x).clone(), (*y).clone()));
                }
            }
        }
    }
    let coefficients = match collision {
        Some(w) => Condition::Fail(w),
        None => coefficient_pairs(s, &pairs, depth, node_budget)?,
    };

    let (rows, signs) = check_rows(m, &image);
    Ok(NoSpecializationReport {
        injective,
        coefficients,
        rows,
        signs,
    })
}

fn coefficient_pairs(
    s: &Seed,
    pairs: &[(VarId, VarId)],
    depth: usize,
    node_budget: usize,
) -> Result<Condition, MorphismError> {
    let open: Vec<&(VarId, VarId)> = pairs
        .iter()
        .filter(|(x, y)| s.exchangeable().iter().any(|v| s.entry(x, v) != s.entry(y, v)))
        .collect();
    if open.is_empty() {
        return Ok(Condition::Pass);
    }
    let conflict = |t: &Seed, seq: &[VarId]| {
        open.iter().find_map(|(x, y)| {
            t.exchangeable().iter().find_map(|z| {
                let (bzx, bzy) = (t.entry(z, x), t.entry(z, y));
                (bzx * bzy < 0).then(|| ConditionWitness::SignConflict {
                    sequence: seq.to_vec(),
                    z: z.clone(),
                    x: x.clone(),
                    y: y.clone(),
                    bzx,
                    bzy,
                })
            })
        })
    };
    let mut seen: BTreeSet<SeedKey> = BTreeSet::from([s.canonical_key()]);
    let mut frontier = vec![(s.clone(), Vec::new())];
    let mut visited = 1usize;
    for level in 0..=depth {
        for (t, seq) in &frontier {
            if let Some(w) = conflict(t, seq) {
                return Ok(Condition::Fail(w));
            }
        }
        if level == depth {
            break;
        }
        let mut next = Vec::new();
        for (t, seq) in &frontier {
            for x in t.exchangeable() {
                let (u, _) = t.mutate(x)?;
                visited += 1;
                if visited > node_budget {
                    return Err(MorphismError::ResourceLimit(visited));
                }
                if seen.insert(u.canonical_key()) {
                    let mut longer = seq.clone();
                    longer.push(x.clone());
                    next.push((u, longer));
                }
            }
        }
        frontier = next;
    }
    Ok(Condition::Inconclusive)
}

fn check_rows(m: &ClusterMap, image: &BTreeMap<VarId, VarId>) -> (Condition, Vec<(BTreeSet<VarId>, i64)>) {
    let s = &m.source;
    let t = &m.target;
    let img_seed = image_seed(m);
    let mut preimages: BTreeMap<&VarId, Vec<&VarId>> = BTreeMap::new();
    for x in s.exchangeable() {
        preimages.entry(&image[x]).or_default().push(x);
    }
    let mut signs = Vec::new();
    for component in exchangeable_component_labels(&img_seed) {
        let mut allowed = [true, true];
        let mut first_bad = None;
        for w in component.iter().filter(|w| img_seed.is_exchangeable(w)) {
            for y in preimages.get(w).into_iter().flatten() {
                let mut pushed: BTreeMap<&VarId, i64> = BTreeMap::new();
                for (v, b) in s.matrix().row(y) {
                    *pushed.entry(&image[v]).or_insert(0) += b;
                }
                pushed.retain(|_, b| *b != 0);
                let target_row: BTreeMap<&VarId, i64> = t.matrix().row(w).collect();
                let negated: BTreeMap<&VarId, i64> = pushed.iter().map(|(v, b)| (*v, -b)).collect();
                let ok = [target_row == pushed, target_row == negated];
                for k in 0..2 {
                    if allowed[k] && !ok[k] {
                        allowed[k] = false;
                        if !allowed[0] && !allowed[1] && first_bad.is_none() {
                            first_bad = Some((*y).clone());
                        }
                    }
                }
            }
        }
        match first_bad {
            Some(y) => return (Condition::Fail(ConditionWitness::RowMismatch { component, y }), signs),
            None => signs.push((component, if allowed[0] { 1 } else { -1 })),
        }
    }
    (Condition::Pass, signs)
}

/// The full subseed of the target on the image labels; its exchangeable
/// variables are the images of source exchangeables that are exchangeable.
pub fn image_seed(m: &ClusterMap) -> Seed {
    let labels: BTreeSet<VarId> = m
        .assignment
        .values()
        .filter_map(|i| match i {
            Image::Var(w) => Some(w.clone()),
            Image::Int(_) => None,
        })
        .collect();
    let ex: BTreeSet<VarId> = m
        .source
        .exchangeable()
        .iter()
        .filter_map(|x| match &m.assignment[x] {
            Image::Var(w) if m.target.is_exchangeable(w) => Some(w.clone()),
            _ => None,
        })
        .collect();
    m.target
        .full_subseed(&labels)
        .with_exchangeable(ex)
        .expect("image exchangeables are image labels")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealOutcome {
    /// Every image found lies in the depth-bounded generator set.
    IdealToDepth(usize),
    /// `image = f(value)` lies outside the polynomial ring on the image
    /// seed's coefficients.
    Witness { value: LaurentPoly, image: LaurentPoly },
    /// Some image is not among the generators found, and membership cannot
    /// be decided for this image seed.
    Inconclusive { value: LaurentPoly, image: LaurentPoly },
}

/// Compares the images of the source cluster variables up to `depth` with
/// the cluster algebra of the image seed.
pub fn check_ideal_witness(m: &ClusterMap, depth: usize, node_budget: usize) -> Result<IdealOutcome, MorphismError> {
    let image = image_seed(m);
    let values = enumerate_cluster_variables(&m.source, depth, node_budget)?;
    let images: Vec<(LaurentPoly, LaurentPoly)> = values
        .into_iter()
        .map(|v| m.apply(&v).map(|i| (v, i)))
        .collect::<Result<_, _>>()?;
    let ring_vars: Option<BTreeSet<VarId>> = if image.exchangeable().is_empty() {
        image.values().map(|v| v.as_var().cloned()).collect()
    } else {
        None
    };
    if let Some(vars) = ring_vars {
        for (value, img) in images {
            if !img.is_polynomial() || !img.variables().is_subset(&vars) {
                return Ok(IdealOutcome::Witness { value, image: img });
            }
        }
        return Ok(IdealOutcome::IdealToDepth(depth));
    }
    let generators: BTreeSet<LaurentPoly> = enumerate_cluster_variables(&image, depth, node_budget)?
        .into_iter()
        .collect();
    for (value, img) in images {
        if img.as_constant().is_none() && !generators.contains(&img) {
            return Ok(IdealOutcome::Inconclusive { value, image: img });
        }
    }
    Ok(IdealOutcome::IdealToDepth(depth))
}

/// `g ∘ f`; integer images stay fixed.
pub fn compose(g: &ClusterMap, f: &ClusterMap) -> Result<ClusterMap, MorphismError> {
    if f.target != g.source {
        return Err(MorphismError::SeedMismatch);
    }
    let assignment = f
        .assignment
        .iter()
        .map(|(x, img)| {
            let out = match img {
                Image::Int(n) => Image::Int(n.clone()),
                Image::Var(w) => {
                    let w = g
                        .source
                        .label_of(f.target.value(w).expect("checked label"))
                        .expect("equal seeds");
                    g.assignment[w].clone()
                }
            };
            (x.clone(), out)
        })
        .collect();
    let substitution = f
        .substitution
        .iter()
        .map(|(v, p)| g.apply(p).map(|q| (v.clone(), q)))
        .collect::<Result<_, _>>()?;
    let declared = f
        .declared
        .iter()
        .map(|(v, d)| g.apply(d).map(|q| (v.clone(), q)))
        .collect::<Result<_, _>>()?;
    Ok(ClusterMap {
        source: f.source.clone(),
        target: g.target.clone(),
        assignment,
        substitution,
        declared,
    })
}

/// Mutually inverse maps induced by a similarity `phi: s -> t`.
pub fn morphism_from_similarity(
    phi: &BTreeMap<VarId, VarId>,
    s: &Seed,
    t: &Seed,
) -> Result<(ClusterMap, ClusterMap), MorphismError> {
    if !verify_similarity(s, t, phi) {
        return Err(MorphismError::NotSimilar);
    }
    let forward = phi.iter().map(|(x, y)| (x.clone(), Image::Var(y.clone()))).collect();
    let inverse = phi.iter().map(|(x, y)| (y.clone(), Image::Var(x.clone()))).collect();
    Ok((
        ClusterMap::new(s.clone(), t.clone(), forward)?,
        ClusterMap::new(t.clone(), s.clone(), inverse)?,
    ))
}

/// Searches for a similarity and builds the induced isomorphism pair.
pub fn isomorphism_if_similar(
    s: &Seed,
    t: &Seed,
    node_budget: usize,
) -> Result<(ClusterMap, ClusterMap), MorphismError> {
    match check_similar(s, t, node_budget)? {
        Similarity::Similar(phi) => morphism_from_similarity(&phi, s, t),
        Similarity::NotSimilar => Err(MorphismError::NotSimilar),
    }
}
