use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::DiscError;

/// One-dimensional kernel families. Each is evaluated coordinatewise and
/// multiplied across dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    /// `1 − max(x, y)`
    Star,
    /// `min(x, y) − x y`
    Ext,
    /// `1/2 − |x − y| + (x − y)²`
    Per,
    /// `(|x − 1/2| + |y − 1/2| − |x − y|) / 2`
    Ctr,
    /// `(1 − 2|x − y|) / 4`
    Sym,
    /// `(1 − |x − y|) / 2`
    Asd,
}

/// `sign` with `sign(0) = 0`: the subgradient of `|u|` at 0 is taken as 0.
#[inline]
fn sgn(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Derivative of `max(x, y)` in `x`; ties split the derivative evenly.
#[inline]
fn dmax(x: f64, y: f64) -> f64 {
    if x > y {
        1.0
    } else if x < y {
        0.0
    } else {
        0.5
    }
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 6] = [
        KernelFamily::Star,
        KernelFamily::Ext,
        KernelFamily::Per,
        KernelFamily::Ctr,
        KernelFamily::Sym,
        KernelFamily::Asd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Star => "star",
            KernelFamily::Ext => "ext",
            KernelFamily::Per => "per",
            KernelFamily::Ctr => "ctr",
            KernelFamily::Sym => "sym",
            KernelFamily::Asd => "asd",
        }
    }

    /// Numeric code used by binary file headers.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    /// `k(x, y)`.
    #[inline]
    pub fn k(self, x: f64, y: f64) -> f64 {
        match self {
            KernelFamily::Star => 1.0 - x.max(y),
            KernelFamily::Ext => x.min(y) - x * y,
            KernelFamily::Per => {
                let u = x - y;
                0.5 - u.abs() + u * u
            }
            KernelFamily::Ctr => 0.5 * ((x - 0.5).abs() + (y - 0.5).abs() - (x - y).abs()),
            KernelFamily::Sym => 0.25 * (1.0 - 2.0 * (x - y).abs()),
            KernelFamily::Asd => 0.5 * (1.0 - (x - y).abs()),
        }
    }

    /// `b(x) = ∫₀¹ k(x, y) dy`.
    #[inline]
    pub fn b(self, x: f64) -> f64 {
        match self {
            KernelFamily::Star => 0.5 * (1.0 - x * x),
            KernelFamily::Ext | KernelFamily::Sym => 0.5 * x * (1.0 - x),
            KernelFamily::Per => 1.0 / 3.0,
            // ∫|x − y| dy = (x² + (1 − x)²)/2 and ∫|y − 1/2| dy = 1/4.
            KernelFamily::Ctr => 0.5 * ((x - 0.5).abs() + 0.25 - 0.5 * (x * x + (1.0 - x) * (1.0 - x))),
            KernelFamily::Asd => 0.25 + 0.5 * x * (1.0 - x),
        }
    }

    /// `c = ∬ k(x, y) dx dy`.
    #[inline]
    pub fn c(self) -> f64 {
        match self {
            KernelFamily::Star | KernelFamily::Per | KernelFamily::Asd => 1.0 / 3.0,
            KernelFamily::Ext | KernelFamily::Ctr | KernelFamily::Sym => 1.0 / 12.0,
        }
    }

    /// `∂k/∂x (x, y)` with the tie conventions of [`sgn`] and [`dmax`].
    #[inline]
    pub fn dk_dx(self, x: f64, y: f64) -> f64 {
        match self {
            KernelFamily::Star => -dmax(x, y),
            KernelFamily::Ext => (1.0 - dmax(x, y)) - y,
            KernelFamily::Per => {
                let u = x - y;
                -sgn(u) + 2.0 * u
            }
            KernelFamily::Ctr => 0.5 * (sgn(x - 0.5) - sgn(x - y)),
            KernelFamily::Sym | KernelFamily::Asd => -0.5 * sgn(x - y),
        }
    }

    /// `b'(x)`.
    #[inline]
    pub fn db(self, x: f64) -> f64 {
        match self {
            KernelFamily::Star => -x,
            KernelFamily::Ext | KernelFamily::Sym | KernelFamily::Asd => 0.5 - x,
            KernelFamily::Per => 0.0,
            KernelFamily::Ctr => 0.5 * (sgn(x - 0.5) + 1.0 - 2.0 * x),
        }
    }

    /// `k(x, x)`.
    #[inline]
    pub fn k_diag(self, x: f64) -> f64 {
        match self {
            KernelFamily::Star => 1.0 - x,
            KernelFamily::Ext => x - x * x,
            KernelFamily::Per | KernelFamily::Asd => 0.5,
            KernelFamily::Ctr => (x - 0.5).abs(),
            KernelFamily::Sym => 0.25,
        }
    }

    /// `d/dx k(x, x)`.
    #[inline]
    pub fn dk_diag(self, x: f64) -> f64 {
        match self {
            KernelFamily::Star => -1.0,
            KernelFamily::Ext => 1.0 - 2.0 * x,
            KernelFamily::Per | KernelFamily::Asd | KernelFamily::Sym => 0.0,
            KernelFamily::Ctr => sgn(x - 0.5),
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KernelFamily::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| alloc::format!("unknown kernel `{s}` (expected star, ext, per, ctr, sym or asd)"))
    }
}

/// A kernel family with optional product weights `γ`.
///
/// Unweighted: `k(x, y) = Π_j k₁(x_j, y_j)`.
/// Weighted: `k(x, y) = Π_j (1 + γ_j k₁(x_j, y_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    weights: Option<Vec<f64>>,
}

impl KernelSpec {
    pub fn new(family: KernelFamily) -> Self {
        KernelSpec { family, weights: None }
    }

    pub fn weighted(family: KernelFamily, weights: Vec<f64>) -> Result<Self, DiscError> {
        if weights.is_empty() {
            return Err(DiscError::InvalidWeights("weight vector is empty"));
        }
        if weights.iter().any(|&g| !(g > 0.0 && g.is_finite())) {
            return Err(DiscError::InvalidWeights(
                "coordinate weights must be positive and finite",
            ));
        }
        Ok(KernelSpec {
            family,
            weights: Some(weights),
        })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Checks that points of dimension `d` are compatible with the weights.
    pub fn check_dim(&self, d: usize) -> Result<(), DiscError> {
        match &self.weights {
            Some(w) if w.len() != d => Err(DiscError::DimensionMismatch {
                expected: w.len(),
                found: d,
            }),
            _ => Ok(()),
        }
    }

    /// `(offset, gain)` of coordinate `j`: the factor is `offset + gain·k₁`.
    #[inline]
    pub(crate) fn affine(&self, j: usize) -> (f64, f64) {
        match &self.weights {
            Some(w) => (1.0, w[j]),
            None => (0.0, 1.0),
        }
    }

    /// Kernel evaluation with a dimension check.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64, DiscError> {
        if x.len() != y.len() {
            return Err(DiscError::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        self.check_dim(x.len())?;
        Ok(self.pair(x, y))
    }

    #[inline]
    pub(crate) fn pair(&self, x: &[f64], y: &[f64]) -> f64 {
        let f = self.family;
        match &self.weights {
            None => x.iter().zip(y).map(|(&a, &b)| f.k(a, b)).product(),
            Some(w) => x
                .iter()
                .zip(y)
                .zip(w)
                .map(|((&a, &b), &g)| 1.0 + g * f.k(a, b))
                .product(),
        }
    }

    #[inline]
    pub(crate) fn diag(&self, x: &[f64]) -> f64 {
        let f = self.family;
        x.iter()
            .enumerate()
            .map(|(j, &a)| {
                let (o, g) = self.affine(j);
                o + g * f.k_diag(a)
            })
            .product()
    }

    /// `b(x) = ∫ k(x, y) dy` over `[0,1]^d`.
    #[inline]
    pub fn mean_embedding(&self, x: &[f64]) -> f64 {
        let f = self.family;
        x.iter()
            .enumerate()
            .map(|(j, &a)| {
                let (o, g) = self.affine(j);
                o + g * f.b(a)
            })
            .product()
    }

    /// `c0 = ∬ k` over `[0,1]^d`.
    pub fn constant(&self, d: usize) -> f64 {
        let c = self.family.c();
        (0..d)
            .map(|j| {
                let (o, g) = self.affine(j);
                o + g * c
            })
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Adaptive Simpson quadrature with the kinks of every family
    /// (at y = x and y = 1/2) used as breakpoints.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
            }
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
    }

    fn integrate_y(family: KernelFamily, x: f64) -> f64 {
        let mut cuts = alloc::vec![0.0, x, 0.5, 1.0];
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| adaptive_simpson(&|y| family.k(x, y), w[0], w[1], 1e-14))
            .sum()
    }

    #[test]
    fn b_and_c_match_quadrature() {
        let mut state = 12345u64;
        for family in KernelFamily::ALL {
            for _ in 0..100 {
                state = crate::hash::mix64(state);
                let x = crate::hash::unit_f64(state);
                let q = integrate_y(family, x);
                assert!(
                    (q - family.b(x)).abs() < 1e-10,
                    "{family} b({x}): {q} vs {}",
                    family.b(x)
                );
            }
            // c as the integral of b, cut at the kinks of b.
            let c = adaptive_simpson(&|x| integrate_y(family, x), 0.0, 0.5, 1e-13)
                + adaptive_simpson(&|x| integrate_y(family, x), 0.5, 1.0, 1e-13);
            assert!((c - family.c()).abs() < 1e-10, "{family} c: {c}");
        }
    }

    #[test]
    fn documented_kernel_values() {
        let star = KernelSpec::new(KernelFamily::Star);
        assert_eq!(star.eval(&[0.0], &[0.0]).unwrap(), 1.0);
        let sym = KernelSpec::new(KernelFamily::Sym);
        assert_eq!(sym.eval(&[0.0], &[1.0]).unwrap(), -0.25);
        let ctr = KernelSpec::new(KernelFamily::Ctr);
        assert_eq!(ctr.eval(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert!(matches!(
            sym.eval(&[0.0], &[1.0, 0.0]),
            Err(DiscError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weighted_kernel_shape() {
        let w = KernelSpec::weighted(KernelFamily::Star, alloc::vec![2.0, 0.5]).unwrap();
        let x = [0.3, 0.6];
        let y = [0.2, 0.9];
        let expect = (1.0 + 2.0 * 0.7) * (1.0 + 0.5 * 0.1);
        assert!((w.eval(&x, &y).unwrap() - expect).abs() < 1e-15);
        assert!((w.constant(2) - (1.0 + 2.0 / 3.0) * (1.0 + 0.5 / 3.0)).abs() < 1e-15);
        assert!(w.eval(&[0.1], &[0.2]).is_err());
        assert!(KernelSpec::weighted(KernelFamily::Sym, alloc::vec![1.0, 0.0]).is_err());
        assert!(KernelSpec::weighted(KernelFamily::Sym, alloc::vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences_off_kinks() {
        let h = 1e-6;
        for family in KernelFamily::ALL {
            for &(x, y) in &[(0.2, 0.7), (0.8, 0.3), (0.45, 0.1), (0.61, 0.9)] {
                let fd = (family.k(x + h, y) - family.k(x - h, y)) / (2.0 * h);
                assert!((fd - family.dk_dx(x, y)).abs() < 1e-8, "{family} dk");
                let fd = (family.b(x + h) - family.b(x - h)) / (2.0 * h);
                assert!((fd - family.db(x)).abs() < 1e-8, "{family} db");
                let fd = (family.k_diag(x + h) - family.k_diag(x - h)) / (2.0 * h);
                assert!((fd - family.dk_diag(x)).abs() < 1e-8, "{family} dk_diag");
                assert_eq!(family.k_diag(x), family.k(x, x));
            }
        }
    }

    #[test]
    fn tie_conventions() {
        assert_eq!(KernelFamily::Star.dk_dx(0.4, 0.4), -0.5);
        assert_eq!(KernelFamily::Ext.dk_dx(0.4, 0.4), 0.5 - 0.4);
        assert_eq!(KernelFamily::Sym.dk_dx(0.4, 0.4), 0.0);
        assert_eq!(KernelFamily::Ctr.dk_dx(0.5, 0.2), 0.5 * (0.0 - 1.0));
    }

    proptest! {
        #[test]
        fn kernels_are_symmetric(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            for family in KernelFamily::ALL {
                prop_assert_eq!(family.k(x, y), family.k(y, x));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for f in KernelFamily::ALL {
            assert_eq!(f.name().parse::<KernelFamily>().unwrap(), f);
            assert_eq!(KernelFamily::from_code(f.code()), Some(f));
        }
    }
}
