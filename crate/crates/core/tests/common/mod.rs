//! Random presentations and random legal move scripts shared by the test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use weinstein_core::abelian::IntMatrix;
use weinstein_core::model::{Crossing, HandleId, NHandle, Nm1Handle, PresentationModel, Sign};
use weinstein_core::moves::{Move, TrackedState};

pub fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub struct Shape {
    pub max_n: usize,
    pub max_nm1: usize,
    pub max_crossings: usize,
    pub local_signs: bool,
}

/// A uniformly random valid presentation within `shape`.
pub fn random_model<R: Rng>(rng: &mut R, shape: &Shape) -> PresentationModel {
    let n_count = rng.gen_range(1..=shape.max_n);
    let nm1_count = rng.gen_range(0..=shape.max_nm1);
    let n_handles: Vec<NHandle> = (0..n_count)
        .map(|i| NHandle::new(format!("h{i}")).loose(rng.gen_bool(0.5)))
        .collect();
    let twisted = shape.local_signs && rng.gen_bool(0.5);
    let nm1_handles = (0..nm1_count)
        .map(|j| {
            let len = rng.gen_range(0..=shape.max_crossings);
            let cs: Vec<Crossing> = (0..len)
                .map(|_| Crossing::new(format!("h{}", rng.gen_range(0..n_count)), random_sign(rng)))
                .collect();
            let h = Nm1Handle::new(format!("g{j}"), cs);
            if twisted {
                let ls = (0..len).map(|_| random_sign(rng)).collect();
                h.with_local_signs(ls)
            } else {
                h
            }
        })
        .collect();
    PresentationModel::new("random", 3, n_handles, nm1_handles).expect("generated model is valid")
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::new(rows, cols, entries).expect("shape matches")
}

pub fn total_crossings(m: &PresentationModel) -> usize {
    m.nm1_handles().iter().map(|h| h.crossings.len()).sum()
}

/// Every move legal in `state` whose result keeps the total crossing count under `cap`.
pub fn legal_moves(state: &TrackedState, fresh: usize, cap: usize) -> Vec<Move> {
    let m = state.presentation();
    let total = total_crossings(m);
    let mut out = Vec::new();
    let ids: Vec<HandleId> = m.n_handles().iter().map(|h| h.id.clone()).collect();
    for slid in &ids {
        for over in &ids {
            if slid == over {
                continue;
            }
            let growth: usize = m.nm1_handles().iter().map(|h| h.crossings.geometric(over)).sum();
            if total + growth > cap {
                continue;
            }
            for epsilon in [Sign::Plus, Sign::Minus] {
                out.push(Move::Slide {
                    slid: slid.clone(),
                    over: over.clone(),
                    epsilon,
                    twists: if epsilon == Sign::Plus { 1 } else { 2 },
                });
            }
        }
    }
    if total < cap {
        out.push(Move::CreatePair {
            new_nm1_id: HandleId::new(format!("c{fresh}")),
            new_n_id: HandleId::new(format!("k{fresh}")),
            loose: fresh.is_multiple_of(2),
        });
    }
    for x in m.nm1_handles() {
        for y in &ids {
            if x.crossings.geometric(y) != 1 {
                continue;
            }
            let elsewhere: usize = m
                .nm1_handles()
                .iter()
                .filter(|h| h.id != x.id)
                .map(|h| h.crossings.geometric(y))
                .sum();
            if total + elsewhere * (x.crossings.len() - 1) > cap {
                continue;
            }
            out.push(Move::CancelPair { nm1_id: x.id.clone(), n_id: y.clone() });
        }
        let cs = x.crossings.as_slice();
        for p in 0..cs.len().saturating_sub(1) {
            let (a, b) = (&cs[p], &cs[p + 1]);
            if a.handle == b.handle
                && a.sign != b.sign
                && x.local_sign_at(p) == x.local_sign_at(p + 1)
                && m.n_handle(&a.handle).is_some_and(|h| h.loose)
            {
                out.push(Move::WhitneyReduce { nm1_id: x.id.clone(), position: p });
            }
        }
    }
    for id in &ids {
        out.push(Move::Reorient { n_handle_id: id.clone() });
    }
    out
}

pub fn kind_index(m: &Move) -> usize {
    match m {
        Move::Slide { .. } => 0,
        Move::CreatePair { .. } => 1,
        Move::CancelPair { .. } => 2,
        Move::WhitneyReduce { .. } => 3,
        Move::Reorient { .. } => 4,
    }
}

/// Picks a move kind uniformly among the available kinds, then a move of that kind.
pub fn random_legal_move<R: Rng>(rng: &mut R, state: &TrackedState, fresh: usize, cap: usize) -> Option<Move> {
    let moves = legal_moves(state, fresh, cap);
    let mut kinds: Vec<usize> = moves.iter().map(kind_index).collect();
    kinds.sort_unstable();
    kinds.dedup();
    let chosen = *kinds.choose(rng)?;
    let of_kind: Vec<&Move> = moves.iter().filter(|m| kind_index(m) == chosen).collect();
    of_kind.choose(rng).map(|m| (*m).clone())
}

/// Exact rank over Q by fraction-free elimination on i128.
#[allow(clippy::needless_range_loop)]
pub fn rank_over_q(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let (f, g) = (a[rank][c], a[i][c]);
                for k in 0..cols {
                    a[i][k] = a[i][k] * f - a[rank][k] * g;
                }
                let gcd = a[i].iter().fold(0i128, |acc, &x| num_integer::Integer::gcd(&acc, &x));
                if gcd > 1 {
                    a[i].iter_mut().for_each(|x| *x /= gcd);
                }
            }
        }
        rank += 1;
    }
    rank
}
