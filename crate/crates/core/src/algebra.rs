//! 't Hooft symbols and the self-dual / anti-self-dual 2-form calculus.
//!
//! Indices are zero-based in code: the su(2) index `i ∈ 0..3` and the frame
//! indices `a, b ∈ 0..4`. The orientation is fixed by `ε_{0123} = +1`.
//!
//! The canonical bases are
//!
//! ```text
//! ζ¹± = e²∧e³ ± e¹∧e⁴,  ζ²± = e³∧e¹ ± e²∧e⁴,  ζ³± = e¹∧e² ± e³∧e⁴
//! ```
//!
//! (one-based as written), with `(ζⁱ₊)_{ab} = ηⁱ_{ab}` and `(ζⁱ₋)_{ab} = η̄ⁱ_{ab}`.

use serde::Serialize;

use crate::scalar::{lit, Real};

pub type Symbol = [[[i8; 4]; 4]; 3];

/// Self-dual 't Hooft symbols `ηⁱ_{ab}`.
pub const ETA: Symbol = [
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
];

/// Anti-self-dual 't Hooft symbols `η̄ⁱ_{ab}`.
pub const ETA_BAR: Symbol = [
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
];

/// Sign of the ordering of frame indices, tied to the orientation `ε_{0123} = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Positive,
}

/// The constant structure tables every other module consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThooftTables {
    pub eta: Symbol,
    pub etabar: Symbol,
    pub orientation: Orientation,
}

impl Default for ThooftTables {
    fn default() -> Self {
        build_thooft()
    }
}

pub fn build_thooft() -> ThooftTables {
    ThooftTables { eta: ETA, etabar: ETA_BAR, orientation: Orientation::Positive }
}

/// Totally antisymmetric symbol with `ε_{0123} = +1`.
pub const fn levi_civita(a: usize, b: usize, c: usize, d: usize) -> i8 {
    let idx = [a, b, c, d];
    let mut sign = 1i8;
    let mut i = 0;
    while i < 4 {
        if idx[i] > 3 {
            return 0;
        }
        let mut j = i + 1;
        while j < 4 {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
            j += 1;
        }
        i += 1;
    }
    sign
}

/// `ε^{ijk}` on the su(2) index.
pub const fn epsilon3(i: usize, j: usize, k: usize) -> i8 {
    levi_civita(i, j, k, 3)
}

/// Which chirality a basis 2-form or symbol belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Chirality {
    SelfDual,
    AntiSelfDual,
}

impl ThooftTables {
    pub fn symbol(&self, chi: Chirality) -> &Symbol {
        match chi {
            Chirality::SelfDual => &self.eta,
            Chirality::AntiSelfDual => &self.etabar,
        }
    }

    /// `Σ_{ab} X^i_{ab} Y^j_{ab}` in exact integer arithmetic.
    pub fn contract(x: &Symbol, i: usize, y: &Symbol, j: usize) -> i32 {
        let mut s = 0i32;
        for a in 0..4 {
            for b in 0..4 {
                s += x[i][a][b] as i32 * y[j][a][b] as i32;
            }
        }
        s
    }

    /// Name of the first identity the tables violate, if any.
    pub fn first_violation(&self) -> Option<&'static str> {
        for sym in [&self.eta, &self.etabar] {
            for i in 0..3 {
                for a in 0..4 {
                    for b in 0..4 {
                        if sym[i][a][b] != -sym[i][b][a] {
                            return Some("antisymmetry");
                        }
                    }
                }
            }
        }
        for (sym, sign) in [(&self.eta, 1i32), (&self.etabar, -1i32)] {
            for i in 0..3 {
                for a in 0..4 {
                    for b in 0..4 {
                        let mut dual = 0i32;
                        for c in 0..4 {
                            for d in 0..4 {
                                dual += levi_civita(a, b, c, d) as i32 * sym[i][c][d] as i32;
                            }
                        }
                        // ½ ε_{abcd} X_{cd} = ±X_{ab}, compared doubled to stay in integers.
                        if dual != 2 * sign * sym[i][a][b] as i32 {
                            return Some("self-duality");
                        }
                    }
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let delta = if i == j { 4 } else { 0 };
                if Self::contract(&self.eta, i, &self.eta, j) != delta
                    || Self::contract(&self.etabar, i, &self.etabar, j) != delta
                {
                    return Some("normalization");
                }
                if Self::contract(&self.eta, i, &self.etabar, j) != 0 {
                    return Some("orthogonality");
                }
            }
        }
        for (x, sx) in [(&self.eta, 1i32), (&self.etabar, -1i32)] {
            for (y, sy) in [(&self.eta, 1i32), (&self.etabar, -1i32)] {
                for i in 0..3 {
                    for j in 0..3 {
                        let w4 = wedge_times4(&x[i], &y[j]);
                        let want = if sx == sy && i == j { 8 * sx } else { 0 };
                        if w4 != want {
                            return Some("intersection");
                        }
                    }
                }
            }
        }
        None
    }
}

/// `ε_{abcd} A_{ab} B_{cd}` = 4 × (coefficient of `dμ` in `A ∧ B`), in integers.
fn wedge_times4(x: &[[i8; 4]; 4], y: &[[i8; 4]; 4]) -> i32 {
    let mut s = 0i32;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    s += levi_civita(a, b, c, d) as i32 * x[a][b] as i32 * y[c][d] as i32;
                }
            }
        }
    }
    s
}

/// Frame components `F_{ab}` of a 2-form `F = ½ F_{ab} eᵃ∧eᵇ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoForm<T> {
    pub comp: [[T; 4]; 4],
}

impl<T: Real> TwoForm<T> {
    pub fn zero() -> Self {
        Self { comp: [[T::zero(); 4]; 4] }
    }

    /// Antisymmetrizes `m`: `F_{ab} = m_{ab} − m_{ba}`.
    pub fn from_antisymmetrized(m: &[[T; 4]; 4]) -> Self {
        let mut f = Self::zero();
        for a in 0..4 {
            for b in 0..4 {
                f.comp[a][b] = m[a][b] - m[b][a];
            }
        }
        f
    }

    /// `eᵃ∧eᵇ` for `a ≠ b`.
    pub fn basis(a: usize, b: usize) -> Self {
        let mut f = Self::zero();
        f.comp[a][b] = T::one();
        f.comp[b][a] = -T::one();
        f
    }

    pub fn from_symbol(sym: &Symbol, i: usize) -> Self {
        let mut f = Self::zero();
        for a in 0..4 {
            for b in 0..4 {
                f.comp[a][b] = T::from_i8(sym[i][a][b]).unwrap();
            }
        }
        f
    }

    /// Canonical basis element `ζⁱ₊` or `ζⁱ₋`.
    pub fn zeta(chi: Chirality, i: usize) -> Self {
        match chi {
            Chirality::SelfDual => Self::from_symbol(&ETA, i),
            Chirality::AntiSelfDual => Self::from_symbol(&ETA_BAR, i),
        }
    }

    pub fn scaled(&self, k: T) -> Self {
        Self { comp: self.comp.map(|r| r.map(|v| v * k)) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut f = *self;
        for a in 0..4 {
            for b in 0..4 {
                f.comp[a][b] = f.comp[a][b] + o.comp[a][b];
            }
        }
        f
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        let mut m = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                m = m.max((self.comp[a][b] - o.comp[a][b]).abs());
            }
        }
        m
    }

    /// `Σ_{ab} F_{ab} X^i_{ab}`.
    pub fn contract_symbol(&self, sym: &Symbol, i: usize) -> T {
        let mut s = T::zero();
        for a in 0..4 {
            for b in 0..4 {
                if sym[i][a][b] != 0 {
                    s = s + self.comp[a][b] * T::from_i8(sym[i][a][b]).unwrap();
                }
            }
        }
        s
    }
}

/// `(*F)_{ab} = ½ ε_{abcd} F_{cd}`.
pub fn hodge_dual<T: Real>(f: &TwoForm<T>) -> TwoForm<T> {
    let mut out = TwoForm::zero();
    let half = lit::<T>(0.5);
    for a in 0..4 {
        for b in 0..4 {
            let mut s = T::zero();
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita(a, b, c, d);
                    if e != 0 {
                        s = s + T::from_i8(e).unwrap() * f.comp[c][d];
                    }
                }
            }
            out.comp[a][b] = half * s;
        }
    }
    out
}

/// Coordinates of `F` on the bases `ζⁱ₊`, `ζⁱ₋`: `c±ⁱ = ¼ Σ F_{ab} (η or η̄)ⁱ_{ab}`.
pub fn project_sd<T: Real>(f: &TwoForm<T>) -> ([T; 3], [T; 3]) {
    let quarter = lit::<T>(0.25);
    let plus = std::array::from_fn(|i| quarter * f.contract_symbol(&ETA, i));
    let minus = std::array::from_fn(|i| quarter * f.contract_symbol(&ETA_BAR, i));
    (plus, minus)
}

/// Inverse of [`project_sd`].
pub fn reconstruct<T: Real>(plus: &[T; 3], minus: &[T; 3]) -> TwoForm<T> {
    let mut f = TwoForm::zero();
    for i in 0..3 {
        f = f
            .add(&TwoForm::zeta(Chirality::SelfDual, i).scaled(plus[i]))
            .add(&TwoForm::zeta(Chirality::AntiSelfDual, i).scaled(minus[i]));
    }
    f
}

/// Coefficient of `dμ` in `A ∧ B`: `¼ ε_{abcd} A_{ab} B_{cd}`.
pub fn wedge<T: Real>(x: &TwoForm<T>, y: &TwoForm<T>) -> T {
    let mut s = T::zero();
    for a in 0..4 {
        for b in 0..4 {
            if x.comp[a][b] == T::zero() {
                continue;
            }
            for c in 0..4 {
                for d in 0..4 {
                    let e = levi_civita(a, b, c, d);
                    if e != 0 {
                        s = s + T::from_i8(e).unwrap() * x.comp[a][b] * y.comp[c][d];
                    }
                }
            }
        }
    }
    s * lit::<T>(0.25)
}
