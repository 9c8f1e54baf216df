#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use clusterkit::seed::ExchangeMatrix;
use clusterkit::{LaurentPoly, Seed, VarId};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

pub fn v(s: &str) -> VarId {
    VarId::from(s)
}

pub fn lp(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

pub fn label(prefix: &str, i: usize) -> VarId {
    VarId::from(format!("{prefix}{}", i + 1).as_str())
}

/// Raw data for a random seed: upper-triangle skew entries, symmetrizer
/// weights and exchangeability flags.
#[derive(Debug, Clone)]
pub struct SeedSpec {
    pub n: usize,
    pub upper: Vec<i64>,
    pub weights: Vec<i64>,
    pub exchangeable: Vec<bool>,
}

impl SeedSpec {
    pub fn build(&self, prefix: &str) -> Seed {
        let n = self.n;
        let mut m = ExchangeMatrix::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let c = self.upper[k];
                k += 1;
                if c != 0 {
                    // b_ij = c e_j, b_ji = -c e_i: symmetrized by e.
                    m.set(label(prefix, i), label(prefix, j), c * self.weights[j]);
                    m.set(label(prefix, j), label(prefix, i), -c * self.weights[i]);
                }
            }
        }
        let labels: Vec<VarId> = (0..n).map(|i| label(prefix, i)).collect();
        let ex = (0..n)
            .filter(|&i| self.exchangeable[i])
            .map(|i| label(prefix, i))
            .collect();
        Seed::initial(labels, ex, m).expect("skew-symmetrizable by construction")
    }
}

pub fn arb_spec(max_rank: usize, max_entry: i64, skew_symmetric: bool) -> impl Strategy<Value = SeedSpec> {
    (1..=max_rank).prop_flat_map(move |n| {
        let weight = if skew_symmetric { 1..=1i64 } else { 1..=2i64 };
        (
            proptest::collection::vec(-max_entry..=max_entry, n * (n - 1) / 2),
            proptest::collection::vec(weight, n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(upper, weights, exchangeable)| SeedSpec {
                n,
                upper,
                weights,
                exchangeable,
            })
    })
}

pub fn arb_seed(max_rank: usize) -> impl Strategy<Value = Seed> {
    arb_spec(max_rank, 2, false).prop_map(|s| s.build("x"))
}

/// Picks exchangeable labels of the successively mutated seeds using the
/// given indices; stops early if a seed has no exchangeable label.
pub fn admissible_from_indices(s: &Seed, picks: &[usize]) -> Vec<VarId> {
    let mut cur = s.clone();
    let mut seq = Vec::new();
    for &i in picks {
        let ex: Vec<&VarId> = cur.exchangeable().iter().collect();
        if ex.is_empty() {
            break;
        }
        let x = ex[i % ex.len()].clone();
        cur = cur.mutate(&x).unwrap().0;
        seq.push(x);
    }
    seq
}

/// All admissible sequences of length `1..=depth`, breadth first.
pub fn admissible_sequences(s: &Seed, depth: usize) -> Vec<Vec<VarId>> {
    let mut out = Vec::new();
    let mut frontier = vec![(Vec::new(), s.clone())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (seq, t) in &frontier {
            for x in t.exchangeable() {
                let mut seq2: Vec<VarId> = seq.clone();
                seq2.push(x.clone());
                next.push((seq2, t.mutate(x).unwrap().0));
            }
        }
        out.extend(next.iter().map(|(q, _)| q.clone()));
        frontier = next;
    }
    out
}

/// Evaluates a Laurent polynomial at a rational point.
pub fn evaluate(p: &LaurentPoly, point: &BTreeMap<VarId, BigRational>) -> BigRational {
    let mut total = BigRational::zero();
    for (m, c) in p.terms() {
        let mut term = BigRational::from_integer(c.clone());
        for (var, e) in m.iter() {
            let x = &point[var];
            let f = if e >= 0 { x.clone() } else { x.recip() };
            for _ in 0..e.unsigned_abs() {
                term *= &f;
            }
        }
        total += term;
    }
    total
}

/// Mutation recurrence on numbers, written against a dense matrix with no
/// use of the library's mutation.
pub struct NumericSeed {
    pub labels: Vec<VarId>,
    pub exchangeable: Vec<bool>,
    pub b: Vec<Vec<i64>>,
    pub values: Vec<BigRational>,
}

impl NumericSeed {
    pub fn new(s: &Seed, point: &BTreeMap<VarId, BigRational>) -> Self {
        let labels: Vec<VarId> = s.labels().cloned().collect();
        let b = labels
            .iter()
            .map(|x| labels.iter().map(|y| s.entry(x, y)).collect())
            .collect();
        NumericSeed {
            exchangeable: labels.iter().map(|l| s.is_exchangeable(l)).collect(),
            values: labels.iter().map(|l| evaluate(s.value(l).unwrap(), point)).collect(),
            labels,
            b,
        }
    }

    pub fn mutate(&mut self, k: usize) {
        let n = self.labels.len();
        let mut plus = BigRational::one();
        let mut minus = BigRational::one();
        for j in 0..n {
            let e = self.b[k][j];
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    plus *= &self.values[j];
                } else {
                    minus *= &self.values[j];
                }
            }
        }
        self.values[k] = (plus + minus) / &self.values[k];
        let old = self.b.clone();
        for i in 0..n {
            for j in 0..n {
                self.b[i][j] = if i == k || j == k {
                    -old[i][j]
                } else {
                    old[i][j] + (old[i][k].abs() * old[k][j] + old[i][k] * old[k][j].abs()) / 2
                };
            }
        }
    }
}

pub fn positive_point(s: &Seed, nums: &[u32]) -> BTreeMap<VarId, BigRational> {
    s.labels()
        .enumerate()
        .map(|(i, l)| {
            let a = nums[(2 * i) % nums.len()] as i64 + 1;
            let b = nums[(2 * i + 1) % nums.len()] as i64 + 1;
            (l.clone(), BigRational::new(BigInt::from(a), BigInt::from(b)))
        })
        .collect()
}

/// Full subseed on `keep` whose exchangeables are the ambient exchangeables
/// with every neighbour inside `keep`.
pub fn coefficient_closed_subseed(s: &Seed, keep: &BTreeSet<VarId>) -> Seed {
    let ex = s
        .exchangeable()
        .iter()
        .filter(|x| keep.contains(*x) && s.neighbors(x).all(|w| keep.contains(w)))
        .cloned()
        .collect();
    s.full_subseed(keep).with_exchangeable(ex).unwrap()
}
