//! Marked points on the circle, arcs, triangulations of the disc and their
//! seeds, flips, and arc families with accumulation points.
//!
//! Angles are fractions of a full turn in `[0, 1)`, increasing
//! counterclockwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::VarId;
use crate::seed::{ExchangeMatrix, Seed};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("a triangulation needs at least two marked points")]
    TooFewPoints,
    #[error("invalid angle {0:?}: expected a reduced fraction in [0, 1)")]
    BadAngle(String),
    #[error("arc endpoint {0} is not a marked point")]
    UnknownPoint(MarkedPoint),
    #[error("arc endpoints must be distinct")]
    DegenerateArc,
    #[error("arcs {0} and {1} cross")]
    CrossingPair(Box<Arc>, Box<Arc>),
    #[error("arc {0} crosses no arc of the triangulation")]
    NotMaximal(Box<Arc>),
    #[error("arc {0} is not the diagonal of a quadrilateral")]
    NotFlippable(Box<Arc>),
    #[error("malformed arc family: {0}")]
    MalformedFamily(String),
    #[error("{0:?} is not an arc label")]
    BadLabel(String),
    #[error("{0} is not an arc of the triangulation")]
    NotAnArc(Box<Arc>),
}

/// Reduces a rational into `[0, 1)`.
pub fn reduce_turn(r: &BigRational) -> BigRational {
    r - BigRational::from_integer(r.floor().to_integer())
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if !den.is_positive() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parses a signed rational such as `-1/2` or `3`.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    parse_rational(s)
}

pub fn format_fraction(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point of the circle, as an exact fraction of a turn.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedPoint(BigRational);

impl MarkedPoint {
    pub fn new(angle: BigRational) -> Result<Self, TriangulationError> {
        if angle.is_negative() || angle >= BigRational::one() {
            return Err(TriangulationError::BadAngle(format_fraction(&angle)));
        }
        Ok(MarkedPoint(angle))
    }

    /// The point at `num/den` of a turn, reduced modulo 1.
    pub fn turn(num: i64, den: i64) -> Self {
        MarkedPoint(reduce_turn(&BigRational::new(num.into(), den.into())))
    }

    pub fn angle(&self) -> &BigRational {
        &self.0
    }
}

impl FromStr for MarkedPoint {
    type Err = TriangulationError;

    /// Accepts only reduced fractions in `[0, 1)`, such as `0` or `3/4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TriangulationError::BadAngle(s.to_string());
        let r = parse_rational(s).ok_or_else(bad)?;
        if format_fraction(&r) != s.trim() {
            return Err(bad());
        }
        MarkedPoint::new(r).map_err(|_| bad())
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_fraction(&self.0))
    }
}

impl fmt::Debug for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p` in the open counterclockwise interval from `x` to `y`.
pub fn in_open_interval(p: &MarkedPoint, x: &MarkedPoint, y: &MarkedPoint) -> bool {
    if x < y {
        x < p && p < y
    } else {
        p > x || p < y
    }
}

/// `p` in the closed counterclockwise interval from `x` to `y` (angles as
/// rationals, so limit points need not be marked points).
pub fn in_closed_interval(p: &BigRational, x: &BigRational, y: &BigRational) -> bool {
    if x <= y {
        x <= p && p <= y
    } else {
        p >= x || p <= y
    }
}

/// An arc: two distinct points, stored with the smaller angle first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    a: MarkedPoint,
    b: MarkedPoint,
}

impl Arc {
    pub fn new(p: MarkedPoint, q: MarkedPoint) -> Result<Self, TriangulationError> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => Ok(Arc { a: p, b: q }),
            std::cmp::Ordering::Greater => Ok(Arc { a: q, b: p }),
            std::cmp::Ordering::Equal => Err(TriangulationError::DegenerateArc),
        }
    }

    /// Arc between `p/n` and `q/n` of a turn; panics if they coincide.
    pub fn turns(p: i64, q: i64, n: i64) -> Self {
        Arc::new(MarkedPoint::turn(p, n), MarkedPoint::turn(q, n)).expect("distinct endpoints")
    }

    pub fn endpoints(&self) -> (&MarkedPoint, &MarkedPoint) {
        (&self.a, &self.b)
    }

    pub fn has_endpoint(&self, p: &MarkedPoint) -> bool {
        &self.a == p || &self.b == p
    }

    /// Cluster label, e.g. `a(0;1/2)`.
    pub fn label(&self) -> VarId {
        VarId::new(&format!("a({};{})", self.a, self.b)).expect("arc labels are valid names")
    }

    pub fn from_label(label: &VarId) -> Result<Self, TriangulationError> {
        let bad = || TriangulationError::BadLabel(label.to_string());
        let inner = label
            .as_str()
            .strip_prefix("a(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (p, q) = inner.split_once(';').ok_or_else(bad)?;
        let arc = Arc::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?).map_err(|_| bad())?;
        if arc.label() != *label {
            return Err(bad());
        }
        Ok(arc)
    }

    /// Both endpoints in the closed interval from `x` to `y`.
    fn within(&self, x: &BigRational, y: &BigRational) -> bool {
        in_closed_interval(self.a.angle(), x, y) && in_closed_interval(self.b.angle(), x, y)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True iff one endpoint of `b` lies strictly on each side of `a`.
pub fn arcs_cross(a: &Arc, b: &Arc) -> bool {
    let side = |p: &MarkedPoint| {
        if in_open_interval(p, &a.a, &a.b) {
            Some(true)
        } else if in_open_interval(p, &a.b, &a.a) {
            Some(false)
        } else {
            None
        }
    };
    matches!((side(&b.a), side(&b.b)), (Some(x), Some(y)) if x != y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Edge,
    Internal,
}

/// A validated triangulation of a convex polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTriangulation {
    points: BTreeSet<MarkedPoint>,
    arcs: BTreeSet<Arc>,
}

impl FiniteTriangulation {
    pub fn points(&self) -> &BTreeSet<MarkedPoint> {
        &self.points
    }

    pub fn arcs(&self) -> &BTreeSet<Arc> {
        &self.arcs
    }

    /// The fan triangulation of the regular `n`-gon from the point 0.
    pub fn fan(n: i64) -> Self {
        let points = (0..n).map(|k| MarkedPoint::turn(k, n)).collect();
        let mut arcs: BTreeSet<Arc> = (0..n).map(|k| Arc::turns(k, k + 1, n)).collect();
        arcs.extend((2..n - 1).map(|k| Arc::turns(0, k, n)));
        validate_triangulation(points, arcs).expect("fan is a triangulation")
    }
}

/// Checks that `arcs` is a maximal set of pairwise non-crossing arcs on `points`.
pub fn validate_triangulation(
    points: BTreeSet<MarkedPoint>,
    arcs: BTreeSet<Arc>,
) -> Result<FiniteTriangulation, TriangulationError> {
    if points.len() < 2 {
        return Err(TriangulationError::TooFewPoints);
    }
    for arc in &arcs {
        for p in [&arc.a, &arc.b] {
            if !points.contains(p) {
                return Err(TriangulationError::UnknownPoint(p.clone()));
            }
        }
    }
    check_non_crossing(&arcs)?;
    let pts: Vec<&MarkedPoint> = points.iter().collect();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            let candidate = Arc::new((*p).clone(), (*q).clone())?;
            if !arcs.contains(&candidate) && !arcs.iter().any(|a| arcs_cross(a, &candidate)) {
                return Err(TriangulationError::NotMaximal(Box::new(candidate)));
            }
        }
    }
    Ok(FiniteTriangulation { points, arcs })
}

pub fn check_non_crossing<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> Result<(), TriangulationError> {
    let list: Vec<&Arc> = arcs.into_iter().collect();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if arcs_cross(a, b) {
                return Err(TriangulationError::CrossingPair(
                    Box::new((*a).clone()),
                    Box::new((*b).clone()),
                ));
            }
        }
    }
    Ok(())
}

/// Edge iff one open side of the arc contains no marked point.
pub fn classify_arc(t: &FiniteTriangulation, a: &Arc) -> ArcKind {
    let empty = |x: &MarkedPoint, y: &MarkedPoint| !t.points.iter().any(|p| in_open_interval(p, x, y));
    if empty(&a.a, &a.b) || empty(&a.b, &a.a) {
        ArcKind::Edge
    } else {
        ArcKind::Internal
    }
}

fn adjacency(arcs: &BTreeSet<Arc>) -> BTreeMap<&MarkedPoint, BTreeSet<&MarkedPoint>> {
    let mut adj: BTreeMap<&MarkedPoint, BTreeSet<&MarkedPoint>> = BTreeMap::new();
    for arc in arcs {
        adj.entry(&arc.a).or_default().insert(&arc.b);
        adj.entry(&arc.b).or_default().insert(&arc.a);
    }
    adj
}

/// Corners `p < q < r` of every triangle whose three sides are in `arcs`.
pub fn triangles(arcs: &BTreeSet<Arc>) -> Vec<[MarkedPoint; 3]> {
    let adj = adjacency(arcs);
    let mut out = Vec::new();
    for arc in arcs {
        let (p, q) = (&arc.a, &arc.b);
        for r in adj[p].intersection(&adj[q]) {
            if *r > q {
                out.push([p.clone(), q.clone(), (*r).clone()]);
            }
        }
    }
    out
}

/// Signed arrows contributed by one triangle with corners `p < q < r`.
///
/// Corners in increasing angle run counterclockwise, so going clockwise
/// around the triangle the sides come in the order `pq, rp, qr`. Each side
/// gets an arrow to the side following it clockwise.
pub fn triangle_arrows(p: &MarkedPoint, q: &MarkedPoint, r: &MarkedPoint) -> [(Arc, Arc); 3] {
    let side = |x: &MarkedPoint, y: &MarkedPoint| Arc::new(x.clone(), y.clone()).expect("distinct corners");
    let (pq, qr, pr) = (side(p, q), side(q, r), side(p, r));
    [(pq.clone(), pr.clone()), (pr, qr.clone()), (qr, pq)]
}

/// Arcs of `arcs` that are diagonals of a quadrilateral with all sides in `arcs`.
pub fn exchangeable_in(arcs: &BTreeSet<Arc>) -> BTreeSet<Arc> {
    let adj = adjacency(arcs);
    arcs.iter()
        .filter(|arc| {
            let common: Vec<&&MarkedPoint> = adj[&arc.a].intersection(&adj[&arc.b]).collect();
            common.iter().any(|y| in_open_interval(y, &arc.a, &arc.b))
                && common.iter().any(|y| in_open_interval(y, &arc.b, &arc.a))
        })
        .cloned()
        .collect()
}

pub fn exchangeable_arcs(t: &FiniteTriangulation) -> BTreeSet<Arc> {
    exchangeable_in(&t.arcs)
}

/// Seed of a set of arcs: one variable per arc, the quadrilateral diagonals
/// exchangeable, one arrow per side pair of every triangle.
pub fn seed_from_arcs(arcs: &BTreeSet<Arc>) -> Seed {
    let mut m = ExchangeMatrix::new();
    for [p, q, r] in triangles(arcs) {
        for (from, to) in triangle_arrows(&p, &q, &r) {
            let (f, t) = (from.label(), to.label());
            m.set(f.clone(), t.clone(), m.get(&f, &t) + 1);
            m.set(t.clone(), f.clone(), m.get(&t, &f) - 1);
        }
    }
    let ex = exchangeable_in(arcs).iter().map(Arc::label).collect();
    Seed::initial(arcs.iter().map(Arc::label), ex, m).expect("triangulation seeds are skew-symmetric")
}

pub fn seed_from_triangulation(t: &FiniteTriangulation) -> Seed {
    seed_from_arcs(&t.arcs)
}

/// The diagonal opposite to `a` in its quadrilateral.
pub fn flip_partner(arcs: &BTreeSet<Arc>, a: &Arc) -> Option<Arc> {
    if !arcs.contains(a) {
        return None;
    }
    let adj = adjacency(arcs);
    let common: Vec<&&MarkedPoint> = adj[&a.a].intersection(&adj[&a.b]).collect();
    let y0 = common.iter().find(|y| in_open_interval(y, &a.a, &a.b))?;
    let y1 = common.iter().find(|y| in_open_interval(y, &a.b, &a.a))?;
    Arc::new((**y0).clone(), (**y1).clone()).ok()
}

pub fn flip_arc(t: &FiniteTriangulation, a: &Arc) -> Result<FiniteTriangulation, TriangulationError> {
    let partner = flip_partner(&t.arcs, a).ok_or_else(|| TriangulationError::NotFlippable(Box::new(a.clone())))?;
    let mut arcs = t.arcs.clone();
    arcs.remove(a);
    arcs.insert(partner);
    validate_triangulation(t.points.clone(), arcs)
}

/// All triangulations reachable from `start` by flips.
pub fn flip_closure(start: &FiniteTriangulation) -> Vec<FiniteTriangulation> {
    let mut seen: BTreeSet<BTreeSet<Arc>> = BTreeSet::from([start.arcs.clone()]);
    let mut out = vec![start.clone()];
    let mut i = 0;
    while i < out.len() {
        let t = out[i].clone();
        for a in exchangeable_arcs(&t) {
            let f = flip_arc(&t, &a).expect("exchangeable arcs flip");
            if seen.insert(f.arcs.clone()) {
                out.push(f);
            }
        }
        i += 1;
    }
    out
}

/// The angles `limit + scale / (k + shift)`, reduced modulo 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleSequence {
    pub limit: BigRational,
    pub scale: BigRational,
    pub shift: i64,
}

impl AngleSequence {
    pub fn at(&self, k: i64) -> MarkedPoint {
        let raw = &self.limit + &self.scale / BigRational::from_integer((k + self.shift).into());
        MarkedPoint(reduce_turn(&raw))
    }

    pub fn limit_point(&self) -> BigRational {
        reduce_turn(&self.limit)
    }

    /// The index `k` (not necessarily admissible) with `at(k) == p`, if any.
    fn index_of(&self, p: &MarkedPoint) -> Option<i64> {
        (-1..=1).find_map(|m: i64| {
            let gap = p.angle() - &self.limit + BigRational::from_integer(m.into());
            if gap.is_zero() {
                return None;
            }
            let k = &self.scale / gap - BigRational::from_integer(self.shift.into());
            if k.is_integer() {
                k.to_integer().try_into().ok()
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Fixed(MarkedPoint),
    Moving(AngleSequence),
}

impl Endpoint {
    fn at(&self, k: i64) -> MarkedPoint {
        match self {
            Endpoint::Fixed(p) => p.clone(),
            Endpoint::Moving(s) => s.at(k),
        }
    }

    fn limit(&self) -> BigRational {
        match self {
            Endpoint::Fixed(p) => p.angle().clone(),
            Endpoint::Moving(s) => s.limit_point(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilyKind {
    Fountain,
    LeftFountain,
    RightFountain,
    Nest,
    HalfNest,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Fountain => "fountain",
            FamilyKind::LeftFountain => "left-fountain",
            FamilyKind::RightFountain => "right-fountain",
            FamilyKind::Nest => "nest",
            FamilyKind::HalfNest => "half-nest",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            FamilyKind::Fountain,
            FamilyKind::LeftFountain,
            FamilyKind::RightFountain,
            FamilyKind::Nest,
            FamilyKind::HalfNest,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Arcs `{first(k), second(k)}` for `k >= start`; a fountain also uses
/// the negative indices `k <= -start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcFamily {
    pub kind: FamilyKind,
    pub first: Endpoint,
    pub second: Endpoint,
    pub start: i64,
}

impl ArcFamily {
    /// Fountain-type family based at `base`, moving endpoint `limit + scale/k`.
    pub fn fountain(kind: FamilyKind, base: MarkedPoint, limit: BigRational, scale: BigRational, start: i64) -> Self {
        ArcFamily {
            kind,
            first: Endpoint::Fixed(base),
            second: Endpoint::Moving(AngleSequence { limit, scale, shift: 0 }),
            start,
        }
    }

    pub fn indices(&self, window: i64) -> Vec<i64> {
        let mut out: Vec<i64> = (self.start..=window).collect();
        if self.kind == FamilyKind::Fountain {
            out.extend((self.start..=window).map(|k| -k));
        }
        out
    }

    pub fn arc_at(&self, k: i64) -> Result<Arc, TriangulationError> {
        Arc::new(self.first.at(k), self.second.at(k))
    }

    fn sequences(&self) -> Vec<(&AngleSequence, bool)> {
        let both = self.kind == FamilyKind::Fountain;
        [&self.first, &self.second]
            .into_iter()
            .filter_map(|e| match e {
                Endpoint::Moving(s) => Some((s, both)),
                Endpoint::Fixed(_) => None,
            })
            .collect()
    }

    /// Checks the shape required by the kind and that the moving endpoints
    /// stay within a quarter turn of their limits.
    pub fn validate(&self) -> Result<(), TriangulationError> {
        let bad = |m: &str| {
            Err(TriangulationError::MalformedFamily(format!(
                "{}: {m}",
                self.kind.name()
            )))
        };
        if self.start < 1 {
            return bad("start index must be at least 1");
        }
        for (s, both) in self.sequences() {
            if s.scale.is_zero() {
                return bad("scale must be nonzero");
            }
            let lowest = self.start + s.shift;
            if lowest < 1 || (both && self.start - s.shift < 1) {
                return bad("shift makes a denominator nonpositive");
            }
            let nearest = if both { lowest.min(self.start - s.shift) } else { lowest };
            let reach = s.scale.abs() / BigRational::from_integer(nearest.into());
            if reach * BigRational::from_integer(4.into()) >= BigRational::one() {
                return bad("moving endpoint starts too far from its limit");
            }
        }
        match (self.kind, &self.first, &self.second) {
            (
                FamilyKind::Fountain | FamilyKind::LeftFountain | FamilyKind::RightFountain,
                Endpoint::Fixed(a),
                Endpoint::Moving(s),
            ) => {
                if *a.angle() == s.limit_point() {
                    return bad("base point equals the limit");
                }
                match self.kind {
                    FamilyKind::LeftFountain if !s.scale.is_positive() => {
                        bad("a left fountain approaches with positive scale")
                    }
                    FamilyKind::RightFountain if !s.scale.is_negative() => {
                        bad("a right fountain approaches with negative scale")
                    }
                    _ => Ok(()),
                }
            }
            (FamilyKind::Fountain | FamilyKind::LeftFountain | FamilyKind::RightFountain, _, _) => {
                bad("expected a fixed first endpoint and a moving second endpoint")
            }
            (FamilyKind::Nest | FamilyKind::HalfNest, Endpoint::Moving(s), Endpoint::Moving(t)) => {
                let same = s.limit_point() == t.limit_point();
                match (self.kind, same) {
                    (FamilyKind::Nest, false) => bad("both endpoints of a nest share one limit"),
                    (FamilyKind::HalfNest, true) => bad("the endpoints of a half-nest have distinct limits"),
                    _ => Ok(()),
                }
            }
            _ => bad("expected two moving endpoints"),
        }
    }

    /// `{lim first, lim second}`, or `None` for a nest.
    pub fn limit_arc(&self) -> Option<Arc> {
        let (a, b) = (self.first.limit(), self.second.limit());
        Arc::new(MarkedPoint(a), MarkedPoint(b)).ok()
    }
}

/// A triangulation given by finitely many explicit points and arcs plus arc
/// families. Edges between consecutive marked points are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InfiniteTriangulation {
    pub points: BTreeSet<MarkedPoint>,
    pub arcs: BTreeSet<Arc>,
    pub families: Vec<ArcFamily>,
    /// Optional starting arcs, one per connected component.
    pub roots: Vec<Arc>,
}

/// Finite piece of an [`InfiniteTriangulation`]: marked points and arcs up to
/// an index bound, each with the least index generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub bound: i64,
    pub points: BTreeMap<MarkedPoint, i64>,
    pub arcs: BTreeMap<Arc, i64>,
}

impl Window {
    pub fn arc_set(&self) -> BTreeSet<Arc> {
        self.arcs.keys().cloned().collect()
    }
}

impl InfiniteTriangulation {
    pub fn validate(&self) -> Result<(), TriangulationError> {
        for f in &self.families {
            f.validate()?;
            if let Endpoint::Fixed(p) = &f.first {
                if !self.points.contains(p) {
                    return Err(TriangulationError::UnknownPoint(p.clone()));
                }
            }
        }
        self.window(self.base_window())?;
        Ok(())
    }

    /// A window bound large enough to show every explicit piece and a few
    /// members of each family.
    pub fn base_window(&self) -> i64 {
        self.families.iter().map(|f| f.start + 2).max().unwrap_or(0)
    }

    fn limit_points(&self) -> Vec<BigRational> {
        self.families
            .iter()
            .flat_map(|f| f.sequences().into_iter().map(|(s, _)| s.limit_point()))
            .collect()
    }

    fn points_up_to(&self, bound: i64) -> BTreeMap<MarkedPoint, i64> {
        let mut out: BTreeMap<MarkedPoint, i64> = self.points.iter().map(|p| (p.clone(), 0)).collect();
        for f in &self.families {
            for k in f.indices(bound) {
                for (s, _) in f.sequences() {
                    let e = out.entry(s.at(k)).or_insert(k.abs());
                    *e = (*e).min(k.abs());
                }
            }
        }
        out
    }

    /// Least index at which `p` appears, if it is a marked point.
    pub fn point_index(&self, p: &MarkedPoint) -> Option<i64> {
        if self.points.contains(p) {
            return Some(0);
        }
        self.families
            .iter()
            .flat_map(|f| {
                f.sequences().into_iter().filter_map(move |(s, both)| {
                    let k = s.index_of(p)?;
                    let ok = k >= f.start || (both && k <= -f.start);
                    ok.then_some(k.abs())
                })
            })
            .min()
    }

    /// Marked points and arcs with index at most `bound`, including the
    /// edges of the marked point set among them. Checks non-crossing.
    pub fn window(&self, bound: i64) -> Result<Window, TriangulationError> {
        let points = self.points_up_to(bound);
        let beyond = self.points_up_to(bound + 1);
        let limits = self.limit_points();
        let mut arcs: BTreeMap<Arc, i64> = BTreeMap::new();
        let mut add = |arc: Arc, k: i64| {
            let e = arcs.entry(arc).or_insert(k);
            *e = (*e).min(k);
        };
        for arc in &self.arcs {
            for p in [&arc.a, &arc.b] {
                if self.point_index(p).is_none() {
                    return Err(TriangulationError::UnknownPoint(p.clone()));
                }
            }
            let k = self.point_index(&arc.a).unwrap().max(self.point_index(&arc.b).unwrap());
            if k <= bound {
                add(arc.clone(), k);
            }
        }
        for f in &self.families {
            for k in f.indices(bound) {
                add(f.arc_at(k)?, k.abs());
            }
        }
        let list: Vec<(&MarkedPoint, &i64)> = points.iter().collect();
        if list.len() >= 2 {
            for i in 0..list.len() {
                let (p, kp) = list[i];
                let (q, kq) = list[(i + 1) % list.len()];
                let empty = !beyond.keys().any(|z| in_open_interval(z, p, q))
                    && !limits.iter().any(|l| in_open_interval(&MarkedPoint(l.clone()), p, q));
                if empty {
                    add(Arc::new(p.clone(), q.clone())?, *kp.max(kq));
                }
            }
        }
        check_non_crossing(arcs.keys())?;
        Ok(Window { bound, points, arcs })
    }

    /// Neighbours of an arc in the seed of the triangulation, with the
    /// signed number of arrows, and whether the arc is exchangeable.
    pub fn arc_neighbors(&self, arc: &Arc) -> Result<(BTreeMap<Arc, i64>, bool), TriangulationError> {
        self.arc_neighbors_in(arc, 0)
    }

    /// Window bound used for the triangles at `arc`: two past the larger of
    /// its endpoint indices and the first index of every family.
    pub fn neighbor_window(&self, arc: &Arc) -> Result<i64, TriangulationError> {
        let k = match (self.point_index(&arc.a), self.point_index(&arc.b)) {
            (Some(x), Some(y)) => x.max(y),
            _ => return Err(TriangulationError::NotAnArc(Box::new(arc.clone()))),
        };
        let first = self.families.iter().map(|f| f.start).max().unwrap_or(0);
        Ok(k.max(first) + 2)
    }

    /// [`Self::arc_neighbors`] computed in a window `extra` steps larger.
    pub fn arc_neighbors_in(&self, arc: &Arc, extra: i64) -> Result<(BTreeMap<Arc, i64>, bool), TriangulationError> {
        let window = self.window(self.neighbor_window(arc)? + extra)?;
        if !window.arcs.contains_key(arc) {
            return Err(TriangulationError::NotAnArc(Box::new(arc.clone())));
        }
        Ok(local_arrows(&window.arc_set(), arc))
    }

    pub fn limit_arcs(&self) -> BTreeSet<Arc> {
        limit_arcs(self)
    }
}

/// Arrows at `arc` from the triangles containing it, and whether it has a
/// triangle on each side.
pub fn local_arrows(arcs: &BTreeSet<Arc>, arc: &Arc) -> (BTreeMap<Arc, i64>, bool) {
    let adj = adjacency(arcs);
    let mut row: BTreeMap<Arc, i64> = BTreeMap::new();
    let (mut left, mut right) = (false, false);
    let empty = BTreeSet::new();
    let common: Vec<&MarkedPoint> = adj
        .get(&arc.a)
        .unwrap_or(&empty)
        .intersection(adj.get(&arc.b).unwrap_or(&empty))
        .copied()
        .collect();
    for r in common {
        left |= in_open_interval(r, &arc.a, &arc.b);
        right |= in_open_interval(r, &arc.b, &arc.a);
        let mut corners = [arc.a.clone(), arc.b.clone(), r.clone()];
        corners.sort();
        let [p, q, s] = &corners;
        for (from, to) in triangle_arrows(p, q, s) {
            if &from == arc {
                *row.entry(to).or_insert(0) += 1;
            } else if &to == arc {
                *row.entry(from).or_insert(0) -= 1;
            }
        }
    }
    row.retain(|_, b| *b != 0);
    (row, left && right)
}

pub fn limit_arcs(it: &InfiniteTriangulation) -> BTreeSet<Arc> {
    it.families.iter().filter_map(ArcFamily::limit_arc).collect()
}

/// Partition of the window's arcs into the parts cut out by limit arcs.
pub fn triangulation_components(
    it: &InfiniteTriangulation,
    bound: i64,
) -> Result<Vec<BTreeSet<Arc>>, TriangulationError> {
    let window = it.window(bound)?;
    let limits = limit_arcs(it);
    let arcs: Vec<&Arc> = window.arcs.keys().collect();
    let separated = |x: &Arc, y: &Arc| {
        limits.iter().any(|l| {
            let (a, b) = (l.a.angle(), l.b.angle());
            (x.within(a, b) && y.within(b, a)) || (x.within(b, a) && y.within(a, b))
        })
    };
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..arcs.len() {
        if limits.contains(arcs[i]) {
            continue;
        }
        for j in i + 1..arcs.len() {
            if limits.contains(arcs[j]) || separated(arcs[i], arcs[j]) {
                continue;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut parts: BTreeMap<usize, BTreeSet<Arc>> = BTreeMap::new();
    for (i, arc) in arcs.iter().enumerate() {
        let r = find(&mut parent, i);
        parts.entry(r).or_default().insert((*arc).clone());
    }
    Ok(parts.into_values().collect())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Fan at 0 onto the points `1/4 + 1/k`, `k >= 5`, converging to 1/4.
pub fn one_sided_fan() -> InfiniteTriangulation {
    InfiniteTriangulation {
        points: BTreeSet::from([MarkedPoint::turn(0, 1)]),
        arcs: BTreeSet::new(),
        families: vec![ArcFamily::fountain(
            FamilyKind::LeftFountain,
            MarkedPoint::turn(0, 1),
            q(1, 4),
            q(1, 1),
            5,
        )],
        roots: Vec::new(),
    }
}

/// Marked points at `1/(2k)` for nonzero integers `k`, fans at 1/4 and 3/4
/// converging to 0 from either side, and the arc `{1/4, 3/4}`.
pub fn split_fountain() -> InfiniteTriangulation {
    let points = [(1, 2), (1, 4), (3, 4), (1, 6), (5, 6)]
        .iter()
        .map(|&(n, d)| MarkedPoint::turn(n, d))
        .collect();
    InfiniteTriangulation {
        points,
        arcs: BTreeSet::from([Arc::turns(1, 3, 4)]),
        families: vec![
            ArcFamily::fountain(FamilyKind::LeftFountain, MarkedPoint::turn(1, 4), q(0, 1), q(1, 2), 4),
            ArcFamily::fountain(FamilyKind::RightFountain, MarkedPoint::turn(3, 4), q(1, 1), q(-1, 2), 4),
        ],
        roots: Vec::new(),
    }
}

/// Fountain at 1/2 onto `1/k` and `1 - 1/k`, `k >= 3`, converging to 0.
pub fn two_sided_fountain() -> InfiniteTriangulation {
    InfiniteTriangulation {
        points: BTreeSet::from([MarkedPoint::turn(1, 2)]),
        arcs: BTreeSet::new(),
        families: vec![ArcFamily::fountain(
            FamilyKind::Fountain,
            MarkedPoint::turn(1, 2),
            q(0, 1),
            q(1, 1),
            5,
        )],
        roots: Vec::new(),
    }
}

/// Nest `{1/2 - 1/(4k), 1/2 + 1/(4k)}` with zigzag diagonals
/// `{1/2 - 1/(4k), 1/2 + 1/(4(k+1))}`, converging to the point 1/2.
pub fn nest() -> InfiniteTriangulation {
    let left = AngleSequence {
        limit: q(1, 2),
        scale: q(-1, 4),
        shift: 0,
    };
    let right = |shift| AngleSequence {
        limit: q(1, 2),
        scale: q(1, 4),
        shift,
    };
    InfiniteTriangulation {
        points: BTreeSet::new(),
        arcs: BTreeSet::new(),
        families: vec![
            ArcFamily {
                kind: FamilyKind::Nest,
                first: Endpoint::Moving(left.clone()),
                second: Endpoint::Moving(right(0)),
                start: 2,
            },
            ArcFamily {
                kind: FamilyKind::Nest,
                first: Endpoint::Moving(left),
                second: Endpoint::Moving(right(1)),
                start: 2,
            },
        ],
        roots: Vec::new(),
    }
}
