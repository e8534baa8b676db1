//! Forward-mode jets over four chart coordinates.
//!
//! [`Jet1`] carries a value and its gradient, [`Jet2`] additionally the full
//! (symmetric) Hessian. Curvature needs two derivatives of the vierbein, so
//! frame fields are evaluated on `Jet2` and the connection is then carried
//! through as `Jet1` quantities.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::{lit, Real, Scalar};

/// Value plus the four first partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1<T> {
    pub val: T,
    pub grad: [T; 4],
}

impl<T: Real> Jet1<T> {
    pub fn constant(val: T) -> Self {
        Self { val, grad: [T::zero(); 4] }
    }

    /// The coordinate function `x^axis` evaluated at `val`.
    pub fn variable(val: T, axis: usize) -> Self {
        let mut grad = [T::zero(); 4];
        grad[axis] = T::one();
        Self { val, grad }
    }
}

impl<T: Real> Add for Jet1<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        let mut grad = self.grad;
        for (g, og) in grad.iter_mut().zip(o.grad) {
            *g = *g + og;
        }
        Self { val: self.val + o.val, grad }
    }
}

impl<T: Real> Sub for Jet1<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        let mut grad = self.grad;
        for (g, og) in grad.iter_mut().zip(o.grad) {
            *g = *g - og;
        }
        Self { val: self.val - o.val, grad }
    }
}

impl<T: Real> Neg for Jet1<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { val: -self.val, grad: self.grad.map(|g| -g) }
    }
}

impl<T: Real> Mul for Jet1<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let mut grad = [T::zero(); 4];
        for (k, g) in grad.iter_mut().enumerate() {
            *g = self.val * o.grad[k] + o.val * self.grad[k];
        }
        Self { val: self.val * o.val, grad }
    }
}

impl<T: Real> Div for Jet1<T> {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let inv = o.val.recip();
        let val = self.val * inv;
        let mut grad = [T::zero(); 4];
        for (k, g) in grad.iter_mut().enumerate() {
            *g = (self.grad[k] - val * o.grad[k]) * inv;
        }
        Self { val, grad }
    }
}

impl<T: Real> Scalar<T> for Jet1<T> {
    #[inline]
    fn cst(v: T) -> Self {
        Self::constant(v)
    }
    #[inline]
    fn value(&self) -> T {
        self.val
    }
    #[inline]
    fn scale(self, k: T) -> Self {
        Self { val: self.val * k, grad: self.grad.map(|g| g * k) }
    }
    #[inline]
    fn chain(self, f0: T, f1: T, _f2: T) -> Self {
        Self { val: f0, grad: self.grad.map(|g| g * f1) }
    }
}

/// Value, gradient and Hessian with respect to four chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2<T> {
    pub val: T,
    pub grad: [T; 4],
    pub hess: [[T; 4]; 4],
}

impl<T: Real> Jet2<T> {
    pub fn constant(val: T) -> Self {
        Self { val, grad: [T::zero(); 4], hess: [[T::zero(); 4]; 4] }
    }

    pub fn variable(val: T, axis: usize) -> Self {
        let mut j = Self::constant(val);
        j.grad[axis] = T::one();
        j
    }

    /// Seeds all four coordinates of a chart point.
    pub fn seed(x: &[T; 4]) -> [Self; 4] {
        std::array::from_fn(|k| Self::variable(x[k], k))
    }

    /// Drops the Hessian.
    pub fn first_order(&self) -> Jet1<T> {
        Jet1 { val: self.val, grad: self.grad }
    }

    /// The first partial `∂_axis` as a first-order jet (its gradient is the
    /// corresponding Hessian row).
    pub fn partial(&self, axis: usize) -> Jet1<T> {
        Jet1 { val: self.grad[axis], grad: self.hess[axis] }
    }
}

impl<T: Real> Add for Jet2<T> {
    type Output = Self;
    #[inline]
    fn add(mut self, o: Self) -> Self {
        self.val = self.val + o.val;
        for i in 0..4 {
            self.grad[i] = self.grad[i] + o.grad[i];
            for j in 0..4 {
                self.hess[i][j] = self.hess[i][j] + o.hess[i][j];
            }
        }
        self
    }
}

impl<T: Real> Sub for Jet2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Jet2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul for Jet2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let mut out = Self::constant(self.val * o.val);
        for i in 0..4 {
            out.grad[i] = self.val * o.grad[i] + o.val * self.grad[i];
            for j in 0..4 {
                out.hess[i][j] = self.val * o.hess[i][j]
                    + o.val * self.hess[i][j]
                    + self.grad[i] * o.grad[j]
                    + o.grad[i] * self.grad[j];
            }
        }
        out
    }
}

impl<T: Real> Div for Jet2<T> {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * Scalar::recip(o)
    }
}

impl<T: Real> Scalar<T> for Jet2<T> {
    #[inline]
    fn cst(v: T) -> Self {
        Self::constant(v)
    }
    #[inline]
    fn value(&self) -> T {
        self.val
    }
    #[inline]
    fn scale(self, k: T) -> Self {
        Self { val: self.val * k, grad: self.grad.map(|g| g * k), hess: self.hess.map(|row| row.map(|h| h * k)) }
    }
    #[inline]
    fn chain(self, f0: T, f1: T, f2: T) -> Self {
        let mut out = Self::constant(f0);
        for i in 0..4 {
            out.grad[i] = f1 * self.grad[i];
            for j in 0..4 {
                out.hess[i][j] = f1 * self.hess[i][j] + f2 * (self.grad[i] * self.grad[j]);
            }
        }
        out
    }
}

/// Evaluates a one-variable function given as a jet map, returning
/// `(φ, φ', φ'')` at `r`.
pub fn univariate<T: Real>(f: impl Fn(Jet2<T>) -> Jet2<T>, r: T) -> [T; 3] {
    let j = f(Jet2::variable(r, 0));
    [j.val, j.grad[0], j.hess[0][0]]
}

/// Central finite-difference step used by the cross-check oracles.
pub fn fd_step<T: Real>(x: T) -> T {
    x.abs().max(T::one()) * lit::<T>(3e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // p(x) = c + b·x + ½ xᵀ A x, with A symmetric.
    struct Quad {
        c: f64,
        b: [f64; 4],
        a: [[f64; 4]; 4],
    }

    impl Quad {
        fn random(rng: &mut ChaCha8Rng) -> Self {
            let mut a = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in i..4 {
                    let v = rng.gen_range(-3.0..3.0);
                    a[i][j] = v;
                    a[j][i] = v;
                }
            }
            Self { c: rng.gen_range(-2.0..2.0), b: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)), a }
        }

        fn eval<S: Scalar<f64>>(&self, x: &[S; 4]) -> S {
            let mut acc = S::cst(self.c);
            for i in 0..4 {
                acc = acc + x[i].scale(self.b[i]);
                for j in 0..4 {
                    acc = acc + (x[i] * x[j]).scale(0.5 * self.a[i][j]);
                }
            }
            acc
        }
    }

    #[test]
    fn quadratic_polynomials_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = Quad::random(&mut rng);
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let j = q.eval(&Jet2::seed(&x));
            for i in 0..4 {
                let g: f64 = q.b[i] + (0..4).map(|k| q.a[i][k] * x[k]).sum::<f64>();
                assert_relative_eq!(j.grad[i], g, epsilon = 1e-12);
                for k in 0..4 {
                    assert_relative_eq!(j.hess[i][k], q.a[i][k], epsilon = 1e-12);
                }
            }
        }
    }

    fn transcendental<S: Scalar<f64>>(x: &[S; 4]) -> S {
        let a = (x[0] * x[1]).sin() + x[2].cos().sq();
        let b = (x[3].sq() + S::cst(2.0)).sqrt();
        a / b + (x[0] + S::cst(3.0)).recip() * x[2]
    }

    #[test]
    fn transcendental_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let j = transcendental(&Jet2::seed(&x));
            assert_relative_eq!(j.val, transcendental(&x), epsilon = 1e-14);
            for i in 0..4 {
                let h = fd_step(x[i]) * 10.0;
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let gp = transcendental(&Jet2::seed(&xp)).grad;
                let gm = transcendental(&Jet2::seed(&xm)).grad;
                let fd = (transcendental(&xp) - transcendental(&xm)) / (2.0 * h);
                assert!((j.grad[i] - fd).abs() < 1e-6);
                for k in 0..4 {
                    let fd2 = (gp[k] - gm[k]) / (2.0 * h);
                    assert!((j.hess[i][k] - fd2).abs() < 1e-6, "hess {i}{k}");
                    assert_eq!(j.hess[i][k], j.hess[k][i]);
                }
            }
        }
    }

    #[test]
    fn jet1_quotient_rule() {
        let a = Jet1 { val: 2.0, grad: [1.0, 0.0, 3.0, 0.0] };
        let b = Jet1 { val: 4.0, grad: [0.0, 1.0, 1.0, 0.0] };
        let q = a / b;
        assert_eq!(q.val, 0.5);
        assert_relative_eq!(q.grad[0], 0.25);
        assert_relative_eq!(q.grad[1], -2.0 / 16.0);
        assert_relative_eq!(q.grad[2], (3.0 * 4.0 - 2.0) / 16.0);
    }

    #[test]
    fn univariate_reads_derivatives() {
        let [v, d1, d2] = univariate(|r| r.sin().scale(2.0), 0.4f64);
        assert_relative_eq!(v, 2.0 * 0.4f64.sin());
        assert_relative_eq!(d1, 2.0 * 0.4f64.cos());
        assert_relative_eq!(d2, -v);
    }
}
