//! Seeded random inputs for verification suites.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{OpenSet, Simplex, SimplicialComplex};
use crate::constructible::{ConstructibleFunction, LocalFunction};
use crate::rational::{qf, Q};

/// A small nonzero rational.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let n = match rng.gen_range(-4..4) {
        0 => 4,
        n => n,
    };
    qf(n, rng.gen_range(1..=3))
}

/// Values on a random subset of `simplices`, each kept with probability 1/2.
pub fn values_on<R: Rng + ?Sized>(simplices: &[Simplex], rng: &mut R) -> Vec<(Simplex, Q)> {
    let mut out = Vec::new();
    for s in simplices {
        if rng.gen_bool(0.5) {
            out.push((s.clone(), rational(rng)));
        }
    }
    out
}

pub fn function<R: Rng + ?Sized>(k: &Arc<SimplicialComplex>, rng: &mut R) -> ConstructibleFunction {
    let all: Vec<Simplex> = k.simplices().iter().cloned().collect();
    ConstructibleFunction::new(Arc::clone(k), values_on(&all, rng)).expect("simplices from the complex")
}

/// A random function compactly supported on `u`.
pub fn local_function<R: Rng + ?Sized>(u: &OpenSet, rng: &mut R) -> LocalFunction {
    LocalFunction::new(u.clone(), values_on(&u.compact_core(), rng)).expect("members of the open set")
}

/// A random complex on `n` vertices: random simplices of dimension up to
/// `max_dim`, face-completed, plus every vertex.
pub fn complex<R: Rng + ?Sized>(n: usize, max_dim: usize, simplices: usize, rng: &mut R) -> SimplicialComplex {
    let verts: Vec<i64> = (0..n as i64).collect();
    let mut maximal: Vec<Vec<i64>> = verts.iter().map(|v| vec![*v]).collect();
    for _ in 0..simplices {
        let k = rng.gen_range(1..=max_dim + 1).min(n);
        let mut pick: Vec<i64> = verts.choose_multiple(rng, k).copied().collect();
        pick.sort_unstable();
        maximal.push(pick);
    }
    SimplicialComplex::from_maximal(maximal).expect("distinct vertices")
}

/// A random subset of `k`'s vertices that is nonempty when `k` is.
pub fn vertex_subset<R: Rng + ?Sized>(k: &SimplicialComplex, rng: &mut R) -> BTreeSet<i64> {
    let mut out: BTreeSet<i64> = k.vertices().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if out.is_empty() {
        if let Some(v) = k.vertices().iter().next() {
            out.insert(*v);
        }
    }
    out
}
