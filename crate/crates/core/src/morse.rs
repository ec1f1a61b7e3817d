//! PL stratified Morse theory for linear height functions.
//!
//! A generic height `u` is given by injective vertex weights and extends
//! linearly over simplices. All critical contributions sit at vertices: the
//! index at `v` is `f(v) - Σ (-1)^dim τ f(v * τ)` over the upper link of `v`.
//! Summing over vertices regroups `Σ (-1)^dim σ f(σ)` by the lowest vertex
//! of each simplex, which is why the total equals the Euler integral.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{Simplex, SimplicialComplex};
use crate::constructible::ConstructibleFunction;
use crate::error::{Error, Result};
use crate::rational::{parity, q, qf, zero, Q};

/// Injective vertex weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    weights: BTreeMap<i64, Q>,
}

impl VertexOrder {
    pub fn new(weights: BTreeMap<i64, Q>) -> Result<Self> {
        let mut seen: BTreeMap<&Q, i64> = BTreeMap::new();
        for (v, w) in &weights {
            if let Some(prev) = seen.insert(w, *v) {
                return Err(Error::NonInjectiveOrder(prev, *v));
            }
        }
        Ok(VertexOrder { weights })
    }

    /// Height `v ↦ ξ · coords(v)`.
    pub fn from_heights(heights: impl IntoIterator<Item = (i64, Q)>) -> Result<Self> {
        Self::new(heights.into_iter().collect())
    }

    /// A random injective order on the vertices of `k`: a shuffled rank plus a
    /// small rational offset so weights are not all integers.
    pub fn random<R: Rng + ?Sized>(k: &SimplicialComplex, rng: &mut R) -> Self {
        let mut verts: Vec<i64> = k.vertices().iter().copied().collect();
        verts.shuffle(rng);
        let denom: i64 = rng.gen_range(1..=7);
        let weights = verts
            .into_iter()
            .enumerate()
            .map(|(rank, v)| (v, q(rank as i64) * q(3) + qf(rng.gen_range(0..3), denom * 3)))
            .collect();
        VertexOrder::new(weights).expect("ranks are distinct and offsets are below one")
    }

    pub fn weight(&self, v: i64) -> Result<&Q> {
        self.weights.get(&v).ok_or(Error::MissingWeight(v))
    }

    pub fn weights(&self) -> &BTreeMap<i64, Q> {
        &self.weights
    }

    /// Whether `v` is the `u`-lowest vertex of `s`.
    fn is_lowest(&self, v: i64, s: &Simplex) -> Result<bool> {
        let wv = self.weight(v)?;
        for w in s.vertices() {
            if *w != v && self.weight(*w)? < wv {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Local index `i_v(f, u)`.
pub fn local_index(f: &ConstructibleFunction, v: i64, u: &VertexOrder) -> Result<Q> {
    let k = f.complex();
    let sv = Simplex::vertex(v);
    if !k.contains(&sv) {
        return Err(Error::SimplexNotInComplex(sv));
    }
    // upper-link simplices τ correspond to cofaces v*τ with v lowest; the
    // sign (-1)^dim τ flips to (-1)^dim(v*τ)
    let mut total = zero();
    for c in k.cofaces(&sv) {
        if u.is_lowest(v, c)? {
            total += parity(c.dim()) * f.value(c);
        }
    }
    Ok(total)
}

/// Sum of local indices over all vertices.
pub fn morse_evaluate(f: &ConstructibleFunction, u: &VertexOrder) -> Result<Q> {
    let mut total = zero();
    for v in f.complex().vertices() {
        u.weight(*v)?;
        total += local_index(f, *v, u)?;
    }
    Ok(total)
}
