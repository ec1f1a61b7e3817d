//! Compactly supported constructible functions and Euler integration.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::complex::{euler_char_cc, same_complex, OpenSet, Simplex, SimplicialComplex, SubdivisionMap};
use crate::error::{Error, Result};
use crate::rational::{parity, zero, Q};

/// A rational value on each open simplex; absent simplices carry zero.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    complex: Arc<SimplicialComplex>,
    values: BTreeMap<Simplex, Q>,
}

impl PartialEq for ConstructibleFunction {
    fn eq(&self, other: &Self) -> bool {
        same_complex(&self.complex, &other.complex).is_ok() && self.values == other.values
    }
}

impl ConstructibleFunction {
    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        ConstructibleFunction {
            complex,
            values: BTreeMap::new(),
        }
    }

    pub fn new(complex: Arc<SimplicialComplex>, values: impl IntoIterator<Item = (Simplex, Q)>) -> Result<Self> {
        let mut f = Self::zero(complex);
        for (s, v) in values {
            if !f.complex.contains(&s) {
                return Err(Error::SimplexNotInComplex(s));
            }
            f.set(s, v);
        }
        Ok(f)
    }

    /// The constant function `c` on every simplex.
    pub fn constant(complex: Arc<SimplicialComplex>, c: Q) -> Self {
        let values = complex.simplices().iter().map(|s| (s.clone(), c.clone()));
        Self::new(Arc::clone(&complex), values).expect("simplices from the complex")
    }

    /// Indicator of a set of open simplices.
    pub fn indicator<'a>(
        complex: Arc<SimplicialComplex>,
        simplices: impl IntoIterator<Item = &'a Simplex>,
    ) -> Result<Self> {
        Self::new(
            complex,
            simplices.into_iter().map(|s| (s.clone(), crate::rational::one())),
        )
    }

    fn set(&mut self, s: Simplex, v: Q) {
        if v.is_zero() {
            self.values.remove(&s);
        } else {
            self.values.insert(s, v);
        }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn value(&self, s: &Simplex) -> Q {
        self.values.get(s).cloned().unwrap_or_else(zero)
    }

    /// Nonzero entries, in simplex order.
    pub fn support(&self) -> &BTreeMap<Simplex, Q> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ_σ (-1)^dim σ · f(σ)`.
    pub fn euler_integral(&self) -> Q {
        self.values.iter().fold(zero(), |acc, (s, v)| acc + parity(s.dim()) * v)
    }

    /// `Σ_t t · χ_c(f⁻¹(t))`, grouping by level sets. Agrees with
    /// [`euler_integral`](Self::euler_integral).
    pub fn euler_integral_by_level_sets(&self) -> Q {
        let mut levels: BTreeMap<&Q, Vec<&Simplex>> = BTreeMap::new();
        for (s, v) in &self.values {
            levels.entry(v).or_default().push(s);
        }
        levels
            .into_iter()
            .fold(zero(), |acc, (t, set)| acc + euler_char_cc(set) * t)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        same_complex(&self.complex, &other.complex)?;
        let mut out = Self::zero(Arc::clone(&self.complex));
        let keys: std::collections::BTreeSet<&Simplex> = self.values.keys().chain(other.values.keys()).collect();
        for s in keys {
            out.set(s.clone(), op(&self.value(s), &other.value(s)));
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_complex(&self.complex, &other.complex)?;
        let mut out = Self::zero(Arc::clone(&self.complex));
        for (s, v) in &self.values {
            out.set(s.clone(), v * other.value(s));
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(Arc::clone(&self.complex));
        for (s, v) in &self.values {
            out.set(s.clone(), v * c);
        }
        out
    }

    /// Raw values on a set of simplices. Test utility; not a cosheaf operation.
    pub fn values_on<'a>(&self, simplices: impl IntoIterator<Item = &'a Simplex>) -> BTreeMap<Simplex, Q> {
        simplices
            .into_iter()
            .filter_map(|s| self.values.get(s).map(|v| (s.clone(), v.clone())))
            .collect()
    }

    /// Pull back along a subdivision: each target simplex takes the value of its carrier.
    pub fn pullback_subdivision(&self, sd: &SubdivisionMap) -> Result<Self> {
        same_complex(&self.complex, sd.source())?;
        let mut out = Self::zero(Arc::clone(sd.target()));
        for (t, c) in sd.carriers() {
            if let Some(v) = self.values.get(c) {
                out.set(t.clone(), v.clone());
            }
        }
        Ok(out)
    }
}

/// A function on an open set `U`; it lies in `Fun_c(U)` exactly when every
/// face of every support simplex is in `U`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFunction {
    open: OpenSet,
    values: BTreeMap<Simplex, Q>,
}

impl LocalFunction {
    pub fn new(open: OpenSet, values: impl IntoIterator<Item = (Simplex, Q)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (s, v) in values {
            if !open.contains(&s) {
                return Err(Error::OutsideOpenSet(s));
            }
            if !v.is_zero() {
                out.insert(s, v);
            }
        }
        Ok(LocalFunction { open, values: out })
    }

    pub fn zero(open: OpenSet) -> Self {
        LocalFunction {
            open,
            values: BTreeMap::new(),
        }
    }

    pub fn open_set(&self) -> &OpenSet {
        &self.open
    }

    pub fn support(&self) -> &BTreeMap<Simplex, Q> {
        &self.values
    }

    pub fn value(&self, s: &Simplex) -> Q {
        self.values.get(s).cloned().unwrap_or_else(zero)
    }

    /// First support simplex with a face outside `U`, if any.
    pub fn compactness_violation(&self) -> Option<(Simplex, Simplex)> {
        self.values.keys().find_map(|s| {
            s.faces()
                .into_iter()
                .find(|f| !self.open.contains(f))
                .map(|f| (s.clone(), f))
        })
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.compactness_violation().is_none()
    }

    pub fn euler_integral(&self) -> Q {
        self.values.iter().fold(zero(), |acc, (s, v)| acc + parity(s.dim()) * v)
    }

    /// Extension by zero to the whole complex.
    pub fn extend_by_zero(&self) -> Result<ConstructibleFunction> {
        if let Some((simplex, face)) = self.compactness_violation() {
            return Err(Error::SupportNotRelativelyCompact { simplex, face });
        }
        ConstructibleFunction::new(Arc::clone(self.open.complex()), self.values.clone())
    }

    /// Re-home onto a larger (or equal) open set.
    pub fn extend_to(&self, larger: &OpenSet) -> Result<LocalFunction> {
        if let Some((simplex, face)) = self.compactness_violation() {
            return Err(Error::SupportNotRelativelyCompact { simplex, face });
        }
        LocalFunction::new(larger.clone(), self.values.clone())
    }
}

/// Free-function form of [`LocalFunction::extend_by_zero`].
pub fn extend_by_zero(f: &LocalFunction, k: &Arc<SimplicialComplex>) -> Result<ConstructibleFunction> {
    same_complex(f.open_set().complex(), k)?;
    f.extend_by_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn s(v: &[i64]) -> Simplex {
        Simplex::new(v.iter().copied()).unwrap()
    }

    fn cx(max: &[&[i64]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::from_maximal(max.iter().map(|m| m.to_vec())).unwrap())
    }

    #[test]
    fn integral_examples() {
        let edge = cx(&[&[0, 1]]);
        let one = ConstructibleFunction::constant(Arc::clone(&edge), q(1));
        assert_eq!(one.euler_integral(), q(1));
        let open = ConstructibleFunction::new(Arc::clone(&edge), [(s(&[0, 1]), q(1))]).unwrap();
        assert_eq!(open.euler_integral(), q(-1));
        let circle = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        let five = ConstructibleFunction::constant(circle, q(5));
        assert_eq!(five.euler_integral(), q(0));
        for f in [&one, &open, &five] {
            assert_eq!(f.euler_integral(), f.euler_integral_by_level_sets());
        }
    }

    #[test]
    fn level_sets_with_mixed_values() {
        let tri = cx(&[&[0, 1, 2]]);
        let f = ConstructibleFunction::new(
            tri,
            [
                (s(&[0]), qf(1, 2)),
                (s(&[1]), qf(1, 2)),
                (s(&[0, 1]), q(3)),
                (s(&[0, 1, 2]), q(-2)),
            ],
        )
        .unwrap();
        // 1/2·2 + 3·(-1) + (-2)·1
        assert_eq!(f.euler_integral_by_level_sets(), q(-4));
        assert_eq!(f.euler_integral(), q(-4));
    }

    #[test]
    fn extend_by_zero_examples() {
        let path = cx(&[&[0, 1], &[1, 2]]);
        let u = path.star_open(&s(&[1])).unwrap();
        let f = LocalFunction::new(u.clone(), [(s(&[1]), q(1))]).unwrap();
        let g = extend_by_zero(&f, &path).unwrap();
        assert_eq!(g.support().len(), 1);
        assert_eq!(g.euler_integral(), f.euler_integral());

        let edge = cx(&[&[0, 1]]);
        let only_edge = OpenSet::new(Arc::clone(&edge), [s(&[0, 1])]).unwrap();
        let f = LocalFunction::new(only_edge, [(s(&[0, 1]), q(1))]).unwrap();
        assert_eq!(
            f.extend_by_zero().unwrap_err(),
            Error::SupportNotRelativelyCompact {
                simplex: s(&[0, 1]),
                face: s(&[0])
            }
        );

        let f = LocalFunction::new(u, [(s(&[1]), q(1)), (s(&[0, 1]), q(1)), (s(&[1, 2]), q(1))]).unwrap();
        assert!(matches!(
            f.extend_by_zero(),
            Err(Error::SupportNotRelativelyCompact { face, .. }) if face == s(&[0])
        ));
    }

    #[test]
    fn arithmetic() {
        let tri = cx(&[&[0, 1, 2]]);
        let f = ConstructibleFunction::new(Arc::clone(&tri), [(s(&[0]), q(2)), (s(&[1, 2]), qf(1, 3))]).unwrap();
        assert!(f.add(&f.scale(&q(-1))).unwrap().is_zero());
        assert_eq!(f.scale(&q(1)), f);
        let other = cx(&[&[0, 1]]);
        assert_eq!(
            f.add(&ConstructibleFunction::zero(other)).unwrap_err(),
            Error::ComplexMismatch
        );
    }

    #[test]
    fn pullback_open_edge() {
        let edge = cx(&[&[0, 1]]);
        let f = ConstructibleFunction::new(Arc::clone(&edge), [(s(&[0, 1]), q(1))]).unwrap();
        let sd = edge.barycentric_subdivision();
        let g = f.pullback_subdivision(&sd).unwrap();
        // vertex ids: [0]→0, [0,1]→1, [1]→2; barycenter is vertex 1
        let expected: BTreeMap<Simplex, Q> = [(s(&[0, 1]), q(1)), (s(&[1]), q(1)), (s(&[1, 2]), q(1))].into();
        assert_eq!(g.support(), &expected);
        assert_eq!(g.euler_integral(), f.euler_integral());

        let c = ConstructibleFunction::constant(Arc::clone(&edge), qf(3, 7));
        assert_eq!(
            c.pullback_subdivision(&sd).unwrap(),
            ConstructibleFunction::constant(Arc::clone(sd.target()), qf(3, 7))
        );
    }
}
