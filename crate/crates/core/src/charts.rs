//! Characteristic cycles on coordinate-embedded complexes.
//!
//! The conormal space of an open simplex `σ` is cut by the hyperplanes
//! `ξ · (w - b) = 0` for link vertices `w` (`b` the barycenter). Each open
//! region is a chamber, named by its sign vector and carrying a rational
//! witness covector. A cycle table assigns a multiplicity to every chamber;
//! `cc` produces one from a constructible function with
//!
//! ```text
//! m(σ, ε) = f(σ) - Σ_{τ ∈ Lk⁺_ε(σ)} (-1)^dim τ · f(σ * τ)
//! ```
//!
//! where `Lk⁺_ε(σ)` is the full subcomplex of the link on ε-positive vertices.
//! With this convention the indicator of a convex polytope has multiplicity
//! one exactly on its outward normal cones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{same_complex, OpenSet, Simplex, SimplicialComplex, SubdivisionMap};
use crate::constructible::{ConstructibleFunction, LocalFunction};
use crate::error::{Error, Result};
use crate::feasibility::{solve_strict, StrictFeasibility};
use crate::linalg;
use crate::morse::VertexOrder;
use crate::rational::{dot, parity, q, qf, zero, Q};

/// Largest link handled; sign vectors are packed into a `u64`.
pub const MAX_LINK: usize = 63;

/// Seed used by [`intersect_zero_section`] when no covector is supplied.
pub const DEFAULT_COVECTOR_SEED: u64 = 0x5eed;

/// Signs on the link vertices of a simplex, in ascending vertex order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(Vec<bool>);

impl SignVector {
    pub fn new(positive: Vec<bool>) -> Self {
        SignVector(positive)
    }

    pub fn empty() -> Self {
        SignVector(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[bool] {
        &self.0
    }

    /// Bit `i` set iff the `i`-th link vertex is positive.
    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, p)| if *p { m | 1 << i } else { m })
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(true),
                '-' => Ok(false),
                _ => Err(Error::Parse {
                    context: "sign vector".into(),
                    message: format!("unexpected {c:?} in {s:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            f.write_str(if *p { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub signs: SignVector,
    /// Ambient covector in the chamber's interior.
    pub witness: Vec<Q>,
}

/// Chamber decomposition of the conormal space at one simplex.
#[derive(Clone, Debug)]
pub struct SimplexChambers {
    pub simplex: Simplex,
    pub link: Vec<i64>,
    /// `(positive-vertex mask of τ, σ * τ, dim τ)` for each link simplex `τ`.
    terms: Vec<(u64, Simplex, usize)>,
    pub chambers: Vec<Chamber>,
}

impl SimplexChambers {
    pub fn find(&self, signs: &SignVector) -> Option<&Chamber> {
        self.chambers
            .binary_search_by(|c| c.signs.cmp(signs))
            .ok()
            .map(|i| &self.chambers[i])
    }

    /// `f(σ) - Σ_{τ ⊆ positive} (-1)^dim τ f(σ*τ)`.
    fn multiplicity(&self, f: &impl Fn(&Simplex) -> Q, positive: u64) -> Q {
        let mut m = f(&self.simplex);
        for (mask, join, d) in &self.terms {
            if mask & !positive == 0 {
                m -= parity(*d) * f(join);
            }
        }
        m
    }

    /// Value of `f(σ)` forced by multiplicity `m` and the values above `σ`.
    fn solve(&self, f: &impl Fn(&Simplex) -> Q, positive: u64, m: &Q) -> Q {
        let mut v = m.clone();
        for (mask, join, d) in &self.terms {
            if mask & !positive == 0 {
                v += parity(*d) * f(join);
            }
        }
        v
    }

    /// Sign vector of a covector, `None` if it lies on a wall.
    pub fn signs_of(&self, chart: &EmbeddedChart, xi: &[Q]) -> Option<SignVector> {
        let b = chart.barycenter(&self.simplex);
        self.link
            .iter()
            .map(|w| {
                let d = dot(xi, &sub(&chart.coords[w], &b));
                if d.is_zero() {
                    None
                } else {
                    Some(d.is_positive())
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(SignVector)
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A complex with rational vertex coordinates in `ℝⁿ`.
#[derive(Clone)]
pub struct EmbeddedChart {
    complex: Arc<SimplicialComplex>,
    dim: usize,
    coords: BTreeMap<i64, Vec<Q>>,
    chambers: OnceLock<BTreeMap<Simplex, SimplexChambers>>,
}

impl fmt::Debug for EmbeddedChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmbeddedChart")
            .field("dim", &self.dim)
            .field("coords", &self.coords)
            .finish()
    }
}

impl PartialEq for EmbeddedChart {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.coords == other.coords && self.complex == other.complex
    }
}

impl EmbeddedChart {
    pub fn new(complex: Arc<SimplicialComplex>, dim: usize, coords: BTreeMap<i64, Vec<Q>>) -> Result<Self> {
        for v in complex.vertices() {
            let c = coords.get(v).ok_or(Error::MissingCoordinates(*v))?;
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
        }
        let coords: BTreeMap<i64, Vec<Q>> = coords
            .into_iter()
            .filter(|(v, _)| complex.vertices().contains(v))
            .collect();
        for s in complex.maximal_simplices() {
            let edges = edge_matrix(&coords, &s);
            if linalg::rank(&edges) != s.dim() {
                return Err(Error::AffinelyDependent(s));
            }
        }
        Ok(EmbeddedChart {
            complex,
            dim,
            coords,
            chambers: OnceLock::new(),
        })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_integer_coords(complex: Arc<SimplicialComplex>, dim: usize, coords: &[(i64, &[i64])]) -> Result<Self> {
        let c = coords
            .iter()
            .map(|(v, x)| (*v, x.iter().map(|t| q(*t)).collect()))
            .collect();
        Self::new(complex, dim, c)
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &BTreeMap<i64, Vec<Q>> {
        &self.coords
    }

    pub fn barycenter(&self, s: &Simplex) -> Vec<Q> {
        let k = qf(1, s.vertices().len() as i64);
        let mut b = vec![zero(); self.dim];
        for v in s.vertices() {
            for (bi, ci) in b.iter_mut().zip(&self.coords[v]) {
                *bi += ci;
            }
        }
        b.iter_mut().for_each(|x| *x *= &k);
        b
    }

    /// Chart on the target of a subdivision, new vertices at barycenters.
    pub fn subdivide(&self, sd: &SubdivisionMap) -> Result<EmbeddedChart> {
        same_complex(&self.complex, sd.source())?;
        let mut coords = self.coords.clone();
        for stage in sd.stages() {
            let step = EmbeddedChart {
                complex: Arc::clone(&stage.before),
                dim: self.dim,
                coords,
                chambers: OnceLock::new(),
            };
            coords = stage
                .vertex_origin
                .iter()
                .map(|(v, s)| (*v, step.barycenter(s)))
                .collect();
        }
        EmbeddedChart::new(Arc::clone(sd.target()), self.dim, coords)
    }

    /// Heights `v ↦ ξ · coords(v)`.
    pub fn heights(&self, xi: &[Q]) -> BTreeMap<i64, Q> {
        self.coords.iter().map(|(v, c)| (*v, dot(xi, c))).collect()
    }

    /// Whether `ξ` is generic (injective heights); returns a colliding pair otherwise.
    pub fn check_generic(&self, xi: &[Q]) -> Result<VertexOrder> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: xi.len(),
            });
        }
        VertexOrder::new(self.heights(xi)).map_err(|e| match e {
            Error::NonInjectiveOrder(a, b) => Error::NonGenericCovector(a, b),
            other => other,
        })
    }

    /// Deterministic generic covector drawn from `seed`.
    pub fn generic_covector(&self, seed: u64) -> Vec<Q> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let xi: Vec<Q> = (0..self.dim)
                .map(|_| qf(rng.gen_range(-997..=997), rng.gen_range(1..=13)))
                .collect();
            if self.check_generic(&xi).is_ok() {
                return xi;
            }
        }
    }

    fn all_chambers(&self) -> Result<&BTreeMap<Simplex, SimplexChambers>> {
        if let Some(c) = self.chambers.get() {
            return Ok(c);
        }
        let mut out = BTreeMap::new();
        for s in self.complex.simplices() {
            out.insert(s.clone(), self.compute_chambers(s)?);
        }
        Ok(self.chambers.get_or_init(|| out))
    }

    /// Chambers at `s`, computed for the whole chart on first use.
    pub fn chambers(&self, s: &Simplex) -> Result<&SimplexChambers> {
        self.all_chambers()?
            .get(s)
            .ok_or_else(|| Error::SimplexNotInComplex(s.clone()))
    }

    /// Whether the complex triangulates the convex hull of its vertices:
    /// connected, pure of full dimension, every codimension-one face on at
    /// most two top simplices, and every boundary facet spanning a
    /// supporting hyperplane.
    pub fn fills_convex_hull(&self) -> bool {
        let k = &self.complex;
        let d = self.dim;
        if k.dim() != Some(d) {
            return false;
        }
        if k.maximal_simplices().iter().any(|m| m.dim() != d) || !connected(k) {
            return false;
        }
        for f in k.simplices().iter().filter(|s| s.dim() + 1 == d) {
            let tops = k.cofaces(f).iter().filter(|c| c.dim() == d).count();
            if tops > 2 {
                return false;
            }
            if tops == 2 {
                continue;
            }
            let v0 = &self.coords[&f.vertices()[0]];
            let rows: linalg::Matrix = f.vertices()[1..].iter().map(|v| sub(&self.coords[v], v0)).collect();
            let normal = match linalg::null_space(&rows, d).into_iter().next() {
                Some(n) => n,
                None => return false,
            };
            let signs: BTreeSet<i8> = self
                .coords
                .values()
                .map(|p| crate::rational::sign(&dot(&normal, &sub(p, v0))))
                .filter(|s| *s != 0)
                .collect();
            if signs.len() > 1 {
                return false;
            }
        }
        true
    }

    pub fn chamber_count(&self) -> Result<usize> {
        Ok(self.all_chambers()?.values().map(|c| c.chambers.len()).sum())
    }

    fn compute_chambers(&self, s: &Simplex) -> Result<SimplexChambers> {
        let link = self.complex.link_vertices(s);
        if link.len() > MAX_LINK {
            return Err(Error::LinkTooLarge {
                simplex: s.clone(),
                size: link.len(),
                limit: MAX_LINK,
            });
        }
        let pos: BTreeMap<i64, usize> = link.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let terms = self
            .complex
            .link_simplices(s)
            .into_iter()
            .map(|tau| {
                let mask = tau.vertices().iter().fold(0u64, |m, v| m | 1 << pos[v]);
                let d = tau.dim();
                (mask, s.join(&tau), d)
            })
            .collect();
        let chambers = enumerate_chambers(self, s, &link)?;
        Ok(SimplexChambers {
            simplex: s.clone(),
            link,
            terms,
            chambers,
        })
    }

    /// Hyperplane normals of the conormal arrangement at `s`, in the
    /// coordinates of a conormal basis. Returns `(basis, rows)`.
    pub fn conormal_system(&self, s: &Simplex, link: &[i64]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
        let basis = linalg::null_space(&edge_matrix(&self.coords, s), self.dim);
        let b = self.barycenter(s);
        let rows = link
            .iter()
            .map(|w| {
                let d = sub(&self.coords[w], &b);
                basis.iter().map(|e| dot(&d, e)).collect()
            })
            .collect();
        (basis, rows)
    }
}

fn edge_matrix(coords: &BTreeMap<i64, Vec<Q>>, s: &Simplex) -> linalg::Matrix {
    let v0 = &coords[&s.vertices()[0]];
    s.vertices()[1..].iter().map(|v| sub(&coords[v], v0)).collect()
}

fn oriented(rows: &[Vec<Q>], signs: &[bool]) -> Vec<Vec<Q>> {
    rows.iter()
        .zip(signs)
        .map(|(r, p)| if *p { r.clone() } else { r.iter().map(|x| -x).collect() })
        .collect()
}

/// All realizable sign vectors at `s`, each with a witness, sorted.
///
/// Hyperplanes are added one at a time; a prefix is extended by a sign only
/// if the strict system stays feasible, which is checked exactly. A prefix
/// that is infeasible has no feasible extension, so the search is exhaustive.
pub fn enumerate_chambers(chart: &EmbeddedChart, s: &Simplex, link: &[i64]) -> Result<Vec<Chamber>> {
    let (basis, rows) = chart.conormal_system(s, link);
    let d = basis.len();
    let mut current: Vec<(Vec<bool>, Vec<Q>)> = vec![(Vec::new(), vec![zero(); d])];
    for (i, row) in rows.iter().enumerate() {
        let mut next = Vec::with_capacity(current.len() * 2);
        for (signs, y) in &current {
            let here = dot(row, y);
            for choice in [false, true] {
                let mut ext = signs.clone();
                ext.push(choice);
                let keeps = if choice { here.is_positive() } else { here.is_negative() };
                if keeps {
                    next.push((ext, y.clone()));
                    continue;
                }
                if let StrictFeasibility::Feasible(w) = solve_strict(&oriented(&rows[..=i], &ext), d) {
                    next.push((ext, w));
                }
            }
        }
        current = next;
    }
    let mut chambers: Vec<Chamber> = current
        .into_iter()
        .map(|(signs, y)| {
            let mut xi = vec![zero(); chart.dim];
            for (yj, e) in y.iter().zip(&basis) {
                for (x, ej) in xi.iter_mut().zip(e) {
                    *x += yj * ej;
                }
            }
            Chamber {
                signs: SignVector(signs),
                witness: xi,
            }
        })
        .collect();
    chambers.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(chambers)
}

/// Rational multiplicities on the chambers of a chart. Zero entries are not stored.
#[derive(Clone, Debug)]
pub struct LagrangianCycleTable {
    chart: Arc<EmbeddedChart>,
    mult: BTreeMap<(Simplex, SignVector), Q>,
}

impl PartialEq for LagrangianCycleTable {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart) && self.mult == other.mult
    }
}

impl LagrangianCycleTable {
    pub fn zero(chart: Arc<EmbeddedChart>) -> Self {
        LagrangianCycleTable {
            chart,
            mult: BTreeMap::new(),
        }
    }

    /// Build from entries; every chamber must exist in the chart.
    pub fn new(
        chart: Arc<EmbeddedChart>,
        entries: impl IntoIterator<Item = ((Simplex, SignVector), Q)>,
    ) -> Result<Self> {
        let mut t = Self::zero(chart);
        for ((s, e), m) in entries {
            let ch = t.chart.chambers(&s)?;
            if ch.find(&e).is_none() {
                return Err(Error::UnknownChamber {
                    simplex: s,
                    signs: e.to_string(),
                });
            }
            let slot = t.mult.entry((s, e)).or_insert_with(zero);
            *slot += m;
        }
        t.mult.retain(|_, m| !m.is_zero());
        Ok(t)
    }

    pub fn chart(&self) -> &Arc<EmbeddedChart> {
        &self.chart
    }

    pub fn entries(&self) -> &BTreeMap<(Simplex, SignVector), Q> {
        &self.mult
    }

    pub fn get(&self, s: &Simplex, e: &SignVector) -> Q {
        self.mult.get(&(s.clone(), e.clone())).cloned().unwrap_or_else(zero)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    /// Simplices carrying a nonzero multiplicity.
    pub fn horizontal_support(&self) -> BTreeSet<Simplex> {
        self.mult.keys().map(|(s, _)| s.clone()).collect()
    }

    fn same_chart(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ComplexMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_chart(other)?;
        let mut mult = self.mult.clone();
        for (k, v) in &other.mult {
            *mult.entry(k.clone()).or_insert_with(zero) += v;
        }
        mult.retain(|_, m| !m.is_zero());
        Ok(LagrangianCycleTable {
            chart: Arc::clone(&self.chart),
            mult,
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut mult: BTreeMap<_, _> = self.mult.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        mult.retain(|_, m: &mut Q| !m.is_zero());
        LagrangianCycleTable {
            chart: Arc::clone(&self.chart),
            mult,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&q(-1)))
    }

    /// Entries over the simplices of an open set.
    pub fn restricted_to(&self, u: &OpenSet) -> BTreeMap<(Simplex, SignVector), Q> {
        self.mult
            .iter()
            .filter(|((s, _), _)| u.contains(s))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

/// Simplices whose multiplicities can be nonzero for `f`: faces of its support.
fn support_closure(support: impl Iterator<Item = Simplex>) -> BTreeSet<Simplex> {
    support.flat_map(|s| s.faces()).collect()
}

/// Characteristic cycle of `f`.
pub fn cc(f: &ConstructibleFunction, chart: &Arc<EmbeddedChart>) -> Result<LagrangianCycleTable> {
    same_complex(f.complex(), chart.complex())?;
    let value = |s: &Simplex| f.value(s);
    let mut mult = BTreeMap::new();
    for s in support_closure(f.support().keys().cloned()) {
        let ch = chart.chambers(&s)?;
        for c in &ch.chambers {
            let m = ch.multiplicity(&value, c.signs.mask());
            if !m.is_zero() {
                mult.insert((s.clone(), c.signs.clone()), m);
            }
        }
    }
    Ok(LagrangianCycleTable {
        chart: Arc::clone(chart),
        mult,
    })
}

/// Characteristic cycle of a compactly supported function on an open set,
/// computed from the open set alone (links of members stay inside it).
pub fn cc_local(f: &LocalFunction, chart: &Arc<EmbeddedChart>) -> Result<BTreeMap<(Simplex, SignVector), Q>> {
    same_complex(f.open_set().complex(), chart.complex())?;
    if let Some((simplex, face)) = f.compactness_violation() {
        return Err(Error::SupportNotRelativelyCompact { simplex, face });
    }
    let value = |s: &Simplex| f.value(s);
    let mut mult = BTreeMap::new();
    for s in f.open_set().members() {
        let ch = chart.chambers(s)?;
        for c in &ch.chambers {
            let m = ch.multiplicity(&value, c.signs.mask());
            if !m.is_zero() {
                mult.insert((s.clone(), c.signs.clone()), m);
            }
        }
    }
    Ok(mult)
}

/// Inverse of [`cc`]. Fails with `InconsistentTable` if the table is not in
/// the image of `cc`.
pub fn cc_inverse(table: &LagrangianCycleTable) -> Result<ConstructibleFunction> {
    let chart = &table.chart;
    let k = chart.complex();
    let mut order: Vec<&Simplex> = k.simplices().iter().collect();
    order.sort_by(|a, b| b.dim().cmp(&a.dim()).then(a.cmp(b)));
    let mut values: BTreeMap<Simplex, Q> = BTreeMap::new();
    for s in order {
        let ch = chart.chambers(s)?;
        let lookup = |t: &Simplex| values.get(t).cloned().unwrap_or_else(zero);
        let mut first: Option<(&SignVector, Q)> = None;
        for c in &ch.chambers {
            let m = table.get(s, &c.signs);
            let v = ch.solve(&lookup, c.signs.mask(), &m);
            match &first {
                None => first = Some((&c.signs, v)),
                Some((e0, v0)) if *v0 != v => {
                    return Err(Error::InconsistentTable {
                        simplex: s.clone(),
                        first: e0.to_string(),
                        second: c.signs.to_string(),
                        first_value: v0.to_string(),
                        second_value: v.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        if let Some((_, v)) = first {
            if !v.is_zero() {
                values.insert(s.clone(), v);
            }
        }
    }
    ConstructibleFunction::new(Arc::clone(k), values)
}

/// Intersection with the zero section through the graph of `d(ξ₀ · x)`.
///
/// With `covector = None` a deterministic generic covector is sampled from
/// [`DEFAULT_COVECTOR_SEED`].
pub fn intersect_zero_section(table: &LagrangianCycleTable, covector: Option<&[Q]>) -> Result<Q> {
    let xi = match covector {
        Some(xi) => {
            table.chart.check_generic(xi)?;
            xi.to_vec()
        }
        None => table.chart.generic_covector(DEFAULT_COVECTOR_SEED),
    };
    intersect_with_generic(table, &xi)
}

/// As [`intersect_zero_section`], sampling the covector from `seed`.
pub fn intersect_zero_section_seeded(table: &LagrangianCycleTable, seed: u64) -> Result<Q> {
    let xi = table.chart.generic_covector(seed);
    intersect_with_generic(table, &xi)
}

fn intersect_with_generic(table: &LagrangianCycleTable, xi: &[Q]) -> Result<Q> {
    let chart = &table.chart;
    let mut total = zero();
    for v in chart.complex().vertices() {
        let s = Simplex::vertex(*v);
        let ch = chart.chambers(&s)?;
        let e = ch.signs_of(chart, xi).ok_or_else(|| {
            let h = chart.heights(xi);
            let w = ch.link.iter().find(|w| h[w] == h[v]).copied().unwrap_or(*v);
            Error::NonGenericCovector(*v, w)
        })?;
        if ch.find(&e).is_none() {
            return Err(Error::UnknownChamber {
                simplex: s,
                signs: e.to_string(),
            });
        }
        total += table.get(&s, &e);
    }
    Ok(total)
}

fn connected(k: &SimplicialComplex) -> bool {
    let Some(&start) = k.vertices().iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in k.link_vertices(&Simplex::vertex(v)) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == k.vertices().len()
}

/// Whether `ξ` lies in the outward normal cone of `conv(polytope)` at `x`:
/// `ξ · (p - x) ≤ 0` for every polytope vertex `p`.
pub fn in_normal_cone(polytope: &[Vec<Q>], x: &[Q], xi: &[Q]) -> bool {
    polytope.iter().all(|p| !dot(xi, &sub(p, x)).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;

    fn s(v: &[i64]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn triangle_chart() -> Arc<EmbeddedChart> {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1, 2]]).unwrap());
        Arc::new(EmbeddedChart::from_integer_coords(k, 2, &[(0, &[0, 0]), (1, &[4, 0]), (2, &[1, 3])]).unwrap())
    }

    #[test]
    fn chamber_counts_on_triangle() {
        let c = triangle_chart();
        assert_eq!(c.chambers(&s(&[0])).unwrap().chambers.len(), 4);
        assert_eq!(c.chambers(&s(&[0, 1])).unwrap().chambers.len(), 2);
        let top = c.chambers(&s(&[0, 1, 2])).unwrap();
        assert_eq!(top.chambers.len(), 1);
        assert!(top.chambers[0].signs.is_empty());
    }

    #[test]
    fn witnesses_are_conormal_and_strict() {
        let c = triangle_chart();
        for sx in c.complex().simplices() {
            let ch = c.chambers(sx).unwrap();
            for chamber in &ch.chambers {
                for row in edge_matrix(c.coords(), sx) {
                    assert!(dot(&row, &chamber.witness).is_zero());
                }
                assert_eq!(ch.signs_of(&c, &chamber.witness).as_ref(), Some(&chamber.signs));
            }
        }
    }

    #[test]
    fn isolated_vertex_has_one_empty_chamber() {
        let k = Arc::new(SimplicialComplex::from_maximal([vec![0], vec![1, 2]]).unwrap());
        let c = EmbeddedChart::from_integer_coords(k, 2, &[(0, &[5, 5]), (1, &[0, 0]), (2, &[1, 0])]).unwrap();
        let ch = c.chambers(&s(&[0])).unwrap();
        assert_eq!(ch.chambers.len(), 1);
        assert!(ch.chambers[0].signs.is_empty());
    }

    #[test]
    fn closed_triangle_normal_cycle() {
        let c = triangle_chart();
        let f = ConstructibleFunction::constant(Arc::clone(c.complex()), one());
        let t = cc(&f, &c).unwrap();
        let poly: Vec<Vec<Q>> = c.coords().values().cloned().collect();
        for sx in c.complex().simplices() {
            let b = c.barycenter(sx);
            for ch in &c.chambers(sx).unwrap().chambers {
                let expected = if in_normal_cone(&poly, &b, &ch.witness) {
                    one()
                } else {
                    zero()
                };
                assert_eq!(t.get(sx, &ch.signs), expected, "{sx} {}", ch.signs);
            }
        }
        assert_eq!(intersect_zero_section(&t, None).unwrap(), one());
    }

    #[test]
    fn open_triangle_multiplicities() {
        let c = triangle_chart();
        let f = ConstructibleFunction::new(Arc::clone(c.complex()), [(s(&[0, 1, 2]), one())]).unwrap();
        let t = cc(&f, &c).unwrap();
        assert_eq!(t.get(&s(&[0, 1, 2]), &SignVector::empty()), one());
        for e in [[0, 1], [0, 2], [1, 2]] {
            // inward = the opposite vertex is positive
            assert_eq!(t.get(&s(&e), &SignVector::parse("+").unwrap()), q(-1));
            assert_eq!(t.get(&s(&e), &SignVector::parse("-").unwrap()), zero());
        }
        for v in 0..3 {
            let ch = c.chambers(&s(&[v])).unwrap();
            for chamber in &ch.chambers {
                let expected = if chamber.signs.to_string() == "++" {
                    one()
                } else {
                    zero()
                };
                assert_eq!(t.get(&s(&[v]), &chamber.signs), expected);
            }
        }
        assert_eq!(intersect_zero_section(&t, None).unwrap(), one());
        assert_eq!(cc_inverse(&t).unwrap(), f);
    }

    #[test]
    fn zero_table_and_inconsistent_table() {
        let c = triangle_chart();
        let z = LagrangianCycleTable::zero(Arc::clone(&c));
        assert!(cc_inverse(&z).unwrap().is_zero());
        assert_eq!(intersect_zero_section(&z, None).unwrap(), zero());
        let f = ConstructibleFunction::zero(Arc::clone(c.complex()));
        assert!(cc(&f, &c).unwrap().is_zero());

        let bad =
            LagrangianCycleTable::new(Arc::clone(&c), [((s(&[0]), SignVector::parse("--").unwrap()), one())]).unwrap();
        assert!(matches!(cc_inverse(&bad), Err(Error::InconsistentTable { simplex, .. }) if simplex == s(&[0])));
    }

    #[test]
    fn unknown_chamber_rejected() {
        let c = triangle_chart();
        let err = LagrangianCycleTable::new(Arc::clone(&c), [((s(&[0]), SignVector::parse("+").unwrap()), one())])
            .unwrap_err();
        assert!(matches!(err, Error::UnknownChamber { .. }));
    }

    #[test]
    fn non_generic_covector_rejected() {
        let c = triangle_chart();
        let t = LagrangianCycleTable::zero(Arc::clone(&c));
        // (0,1) gives vertices 0 and 1 equal height
        assert!(matches!(
            intersect_zero_section(&t, Some(&[zero(), one()])),
            Err(Error::NonGenericCovector(..))
        ));
    }

    #[test]
    fn affinely_dependent_rejected() {
        let k = Arc::new(SimplicialComplex::from_maximal([[0, 1, 2]]).unwrap());
        let err = EmbeddedChart::from_integer_coords(k, 2, &[(0, &[0, 0]), (1, &[1, 1]), (2, &[2, 2])]).unwrap_err();
        assert_eq!(err, Error::AffinelyDependent(s(&[0, 1, 2])));
    }

    #[test]
    fn subdivided_chart_places_barycenters() {
        let c = triangle_chart();
        let sd = c.complex().barycentric_subdivision();
        let c2 = c.subdivide(&sd).unwrap();
        for (v, origin) in &sd.stages()[0].vertex_origin {
            assert_eq!(c2.coords()[v], c.barycenter(origin));
        }
        let f = ConstructibleFunction::constant(Arc::clone(c2.complex()), one());
        let t = cc(&f, &Arc::new(c2)).unwrap();
        assert_eq!(intersect_zero_section(&t, None).unwrap(), one());
    }
}
