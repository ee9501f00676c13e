//! Radial q-analysis on the lattice `x = q^(−2m)`: the q-difference operator `D`,
//! the radial Laplacian `□⁽⁰⁾ = −D x(1 − q⁻¹x) D`, its eigenfunctions `Φ_l`, truncated
//! spectra, the modules `V^(l)` and the embeddings `i^(l)`, `j^(l)`.
//!
//! Values are generic over [`Field`]: `ExactScalar` (with `q` symbolic), `f64` and
//! `Complex64` (with `q` a number).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::discfun::{f0_e, f0_f, radial_compose, radial_decompose, FinElement, FunElement};
use crate::error::{Error, Result};
use crate::hopf::{act, casimir};
use crate::scalar::{ExactScalar, NumericContext};

/// Coefficient field for radial functions.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Field for ExactScalar {}
impl Field for f64 {}
impl Field for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// `q^n` for `q` given as an element of the field.
pub fn qpow<T: Field>(q: &T, n: i64) -> T {
    let p = num_traits::pow(q.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        T::one() / p
    } else {
        p
    }
}

/// Values on `m = 0..N−1` at `x = q^(−2m)` (parity 0) or `x = q^(−2m−1)` (parity 1).
/// Points outside the window count as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFn<T> {
    pub values: Vec<T>,
    pub parity: u8,
}

impl<T: Field> RadialFn<T> {
    pub fn new(values: Vec<T>) -> Self {
        RadialFn { values, parity: 0 }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![T::zero(); n])
    }

    /// `δ_m` on a window of length `n`.
    pub fn delta(m: usize, n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.values[m] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, m: i64) -> T {
        if m < 0 {
            return T::zero();
        }
        self.values.get(m as usize).cloned().unwrap_or_else(T::zero)
    }

    /// The lattice point `x_m` of this parity.
    pub fn point(&self, q: &T, m: usize) -> T {
        qpow(q, -(2 * m as i64 + self.parity as i64))
    }

    pub fn scale(&self, c: &T) -> Self {
        RadialFn { values: self.values.iter().map(|v| v.clone() * c.clone()).collect(), parity: self.parity }
    }

    /// Zero-pads (or cuts) to length `n`.
    pub fn resized(&self, n: usize) -> Self {
        let mut values = self.values.clone();
        values.resize(n, T::zero());
        RadialFn { values, parity: self.parity }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let values = (0..n as i64).map(|m| self.get(m) - other.get(m)).collect();
        RadialFn { values, parity: self.parity }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> RadialFn<U> {
        RadialFn { values: self.values.iter().map(f).collect(), parity: self.parity }
    }
}

/// `(Dψ)(t) = (ψ(q⁻¹t) − ψ(qt))/(q⁻¹t − qt)` on the opposite-parity lattice.
pub fn q_diff<T: Field>(psi: &RadialFn<T>, q: &T) -> RadialFn<T> {
    let n = psi.len();
    let qq = T::one() / q.clone() - q.clone();
    let values = match psi.parity {
        // t = q^(−2m−1): neighbours x_(m+1), x_m
        0 => (0..n as i64).map(|m| (psi.get(m + 1) - psi.get(m)) / (qq.clone() * qpow(q, -2 * m - 1))).collect(),
        // t = q^(−2m): neighbours q^(−2m−1), q^(−2m+1)
        _ => (0..n as i64).map(|m| (psi.get(m) - psi.get(m - 1)) / (qq.clone() * qpow(q, -2 * m))).collect(),
    };
    RadialFn { values, parity: 1 - psi.parity.min(1) }
}

/// `(Dψ)(q^e)` at an arbitrary lattice exponent, `ψ` read as zero off its lattice.
pub fn q_diff_at<T: Field>(psi: &RadialFn<T>, e: i64, q: &T) -> T {
    let at = |x: i64| -> T {
        // x = −(2m + parity)
        let v = -x - psi.parity as i64;
        if v >= 0 && v % 2 == 0 {
            psi.get(v / 2)
        } else {
            T::zero()
        }
    };
    (at(e - 1) - at(e + 1)) / (qpow(q, e - 1) - qpow(q, e + 1))
}

/// `□⁽⁰⁾ψ = −D x(1 − q⁻¹x) Dψ` for `ψ` on the integer lattice; the weight vanishes at
/// `x = q`, so no point below `m = 0` enters, and values past the window are zero.
pub fn box0<T: Field>(psi: &RadialFn<T>, q: &T) -> RadialFn<T> {
    debug_assert_eq!(psi.parity, 0, "box0 acts on the integer lattice");
    let d = q_diff(psi, q);
    let w: Vec<T> = (0..d.len())
        .map(|m| {
            let x = d.point(q, m);
            let wx = x.clone() * (T::one() - x / q.clone());
            d.values[m].clone() * wx
        })
        .collect();
    let dd = q_diff(&RadialFn { values: w, parity: 1 }, q);
    RadialFn { values: dd.values.into_iter().map(|v| -v).collect(), parity: 0 }
}

/// `Ωψ = q □⁽⁰⁾ψ`.
pub fn casimir_radial<T: Field>(psi: &RadialFn<T>, q: &T) -> RadialFn<T> {
    box0(psi, q).scale(q)
}

/// A tridiagonal operator: row `m` is `sub[m]·ψ_(m−1) + diag[m]·ψ_m + sup[m]·ψ_(m+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagOp<T> {
    pub diag: Vec<T>,
    pub sub: Vec<T>,
    pub sup: Vec<T>,
}

impl<T: Field> TridiagOp<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, psi: &RadialFn<T>) -> RadialFn<T> {
        let values = (0..self.len())
            .map(|m| {
                let i = m as i64;
                self.sub[m].clone() * psi.get(i - 1)
                    + self.diag[m].clone() * psi.get(i)
                    + self.sup[m].clone() * psi.get(i + 1)
            })
            .collect();
        RadialFn { values, parity: psi.parity }
    }
}

/// The matrix of `□⁽⁰⁾` on `m < N`, with `c = q²/(1 − q²)²`:
/// `B[m][m+1] = c(q⁻² − q^(2m))`, `B[m][m−1] = c(1 − q^(2m))`, `B[m][m] = −c(q⁻² + 1 − 2q^(2m))`.
pub fn box0_matrix<T: Field>(n: usize, q: &T) -> TridiagOp<T> {
    let q2 = q.clone() * q.clone();
    let c = q2.clone() / ((T::one() - q2.clone()) * (T::one() - q2.clone()));
    let a = T::one() / q2;
    let mut op = TridiagOp { diag: Vec::with_capacity(n), sub: Vec::with_capacity(n), sup: Vec::with_capacity(n) };
    for m in 0..n {
        let p = qpow(q, 2 * m as i64);
        op.sup.push(c.clone() * (a.clone() - p.clone()));
        op.sub.push(c.clone() * (T::one() - p.clone()));
        op.diag.push(-(c.clone() * (a.clone() + T::one() - p.clone() - p)));
    }
    op
}

/// The coefficient of the (0,1)-form `∂̄ψ`: `−(ψ(y) − ψ(q²y))/(y − q²y)` at `y = q^(2m)`.
pub fn dbar_radial<T: Field>(psi: &RadialFn<T>, q: &T) -> RadialFn<T> {
    let q2 = q.clone() * q.clone();
    let values = (0..psi.len() as i64)
        .map(|m| {
            let y = qpow(q, 2 * m);
            -((psi.get(m) - psi.get(m + 1)) / (y.clone() - q2.clone() * y))
        })
        .collect();
    RadialFn { values, parity: psi.parity }
}

fn abs2<T: Field>(v: &T) -> T {
    v.clone() * v.conj()
}

/// `(‖ψ‖², ‖∂̄ψ‖²)`: `‖ψ‖² = q² ∫₁^∞ |ψ|² d_(q⁻²)t` and
/// `‖∂̄ψ‖² = (1 − q²)⁻¹ Σ_m |ψ_m − ψ_(m+1)|² (1 − q^(2m+2)) q^(−2m)`.
pub fn norms<T: Field>(psi: &RadialFn<T>, q: &T) -> (T, T) {
    let q2 = q.clone() * q.clone();
    let sq = psi.map(abs2);
    let norm_sq = q2.clone() * q_integral(&sq, IntegralKind::Ray, q);
    let mut acc = T::zero();
    for m in 0..psi.len() as i64 {
        let d = psi.get(m) - psi.get(m + 1);
        acc = acc + abs2(&d) * (T::one() - qpow(q, 2 * m + 2)) * qpow(q, -2 * m);
    }
    (norm_sq, acc / (T::one() - q2))
}

/// The Jackson inner product `⟨a, b⟩ = q² ∫₁^∞ a · conj(b) d_(q⁻²)t`.
pub fn jackson_inner<T: Field>(a: &RadialFn<T>, b: &RadialFn<T>, q: &T) -> T {
    let n = a.len().max(b.len());
    let prod = RadialFn::new((0..n as i64).map(|m| a.get(m) * b.get(m).conj()).collect());
    q.clone() * q.clone() * q_integral(&prod, IntegralKind::Ray, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralKind {
    /// `∫₁^∞ f d_(q⁻²)t = (q⁻² − 1) Σ f(x_m) x_m`
    Ray,
    /// `∫₀^∞ f d_(q²)x = (1 − q²) Σ f(x_m) x_m`, `f` vanishing below the window
    Line,
}

pub fn q_integral<T: Field>(f: &RadialFn<T>, kind: IntegralKind, q: &T) -> T {
    let q2 = q.clone() * q.clone();
    let s = f.values.iter().enumerate().fold(T::zero(), |acc, (m, v)| acc + v.clone() * f.point(q, m));
    let w = match kind {
        IntegralKind::Ray => T::one() / q2 - T::one(),
        IntegralKind::Line => T::one() - q2,
    };
    w * s
}

/// Exact check of `Ωψ = q □⁽⁰⁾ψ` for a radial finite function: returns the layers of
/// `act_fun(Ω, ψ)` and `q □⁽⁰⁾ψ` on a window two points past the support.
pub fn casimir_correspondence(
    psi: &RadialFn<ExactScalar>,
) -> (BTreeMap<i64, RadialFn<ExactScalar>>, RadialFn<ExactScalar>) {
    let fin = radial_compose(&[(0, psi.clone())].into_iter().collect());
    let lhs = radial_decompose(&act(&casimir(), &FunElement::from(fin)));
    let window = psi.resized(psi.len() + 2);
    (lhs, casimir_radial(&window, &ExactScalar::q()))
}

/// Whether the correspondence holds exactly for `ψ`.
pub fn casimir_matches(psi: &RadialFn<ExactScalar>) -> bool {
    let (lhs, rhs) = casimir_correspondence(psi);
    let zero_elsewhere = lhs.iter().all(|(j, f)| *j == 0 || f.values.iter().all(|v| v.is_zero()));
    let layer0 = lhs.get(&0).cloned().unwrap_or_else(|| RadialFn::zeros(0));
    zero_elsewhere && layer0.sub(&rhs).values.iter().all(|v| v.is_zero())
}

/// Parameter zones for `V^(l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Zone {
    /// `−1/2 < Re l < 0`, `Im l = 0`
    L1,
    /// `Re l = −1/2`, `0 ≤ Im l < π/h`
    L2,
    /// `Re l > −1/2`, `Im l = π/h`
    L3,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    pub l: Complex64,
    pub zone: Zone,
}

const ZONE_TOL: f64 = 1e-12;

/// Canonical representative of `l` modulo `l ~ l + 2πi/h` and `l ~ −1 − l`, with its zone.
pub fn classify_l(l: Complex64, ctx: &NumericContext) -> SpectralParam {
    let h = ctx.h();
    let period = 2.0 * PI / h;
    let half = PI / h;
    let reduce = |im: f64| -> f64 {
        // into (−π/h, π/h]
        let mut r = im - period * ((im + half) / period).floor();
        if (r + half).abs() <= ZONE_TOL * period.max(1.0) {
            r = half;
        }
        r
    };
    let mut l = Complex64::new(l.re, reduce(l.im));
    let on_axis = (l.re + 0.5).abs() <= ZONE_TOL;
    if (l.re < -0.5 && !on_axis) || (on_axis && l.im < -ZONE_TOL) {
        l = Complex64::new(-1.0 - l.re, reduce(-l.im));
    }
    let on_axis = (l.re + 0.5).abs() <= ZONE_TOL;
    let zone = if on_axis && l.im >= -ZONE_TOL && l.im < half - ZONE_TOL {
        Zone::L2
    } else if l.im.abs() <= ZONE_TOL && l.re > -0.5 && l.re < 0.0 {
        Zone::L1
    } else if (l.im - half).abs() <= ZONE_TOL && l.re > -0.5 {
        Zone::L3
    } else {
        Zone::Other
    };
    if on_axis {
        l.re = -0.5;
    }
    SpectralParam { l, zone }
}

/// `e^(h/2) sh(lh/2) sh((l+1)h/2) / sh²(h/2)`, the eigenvalue of `□⁽⁰⁾` on `Φ_l`.
pub fn lambda_of_l(p: &SpectralParam, ctx: &NumericContext) -> Complex64 {
    (ctx.h() / 2.0).exp() * lambda_omega(p.l, ctx)
}

/// `sh(lh/2) sh((l+1)h/2) / sh²(h/2)`, the eigenvalue of `Ω` on `V^(l)`.
pub fn lambda_omega(l: Complex64, ctx: &NumericContext) -> Complex64 {
    let h = ctx.h();
    let s = (h / 2.0).sinh();
    (l * h / 2.0).sinh() * ((l + 1.0) * h / 2.0).sinh() / (s * s)
}

/// The lattice solution of `□⁽⁰⁾Φ = λ(l)Φ` with `Φ(1) = 1`, by upward recurrence.
pub fn phi_l(p: &SpectralParam, n: usize, ctx: &NumericContext) -> Result<RadialFn<Complex64>> {
    if n < 2 {
        return Err(Error::CutoffTooSmall { cutoff: n, needed: 2 });
    }
    let lam = lambda_of_l(p, ctx);
    let b = box0_matrix(n, &ctx.q());
    let mut phi = vec![Complex64::zero(); n];
    phi[0] = Complex64::one();
    for m in 0..n - 1 {
        let lead = b.sup[m];
        if lead.abs() < f64::MIN_POSITIVE {
            return Err(Error::RecurrenceBreakdown(m));
        }
        let prev = if m > 0 { phi[m - 1] * b.sub[m] } else { Complex64::zero() };
        phi[m + 1] = ((lam - b.diag[m]) * phi[m] - prev) / lead;
    }
    Ok(RadialFn::new(phi))
}

/// `max |(□⁽⁰⁾ − λ)Φ|` over rows `m < N − 1`.
pub fn phi_residual(phi: &RadialFn<Complex64>, lam: Complex64, ctx: &NumericContext) -> f64 {
    let q = Complex64::new(ctx.q(), 0.0);
    let r = box0(phi, &q);
    (0..phi.len() - 1).map(|m| (r.values[m] - lam * phi.values[m]).norm()).fold(0.0, f64::max)
}

/// Truncated spectral data of `−□⁽⁰⁾`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub q: f64,
    pub n: usize,
    /// Ascending.
    pub eigs: Vec<f64>,
    /// `|⟨v_i, f0⟩|²`, normalized so they sum to `‖f0‖² = 1 − q²`.
    pub weights: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
}

/// The symmetric Jacobi matrix similar to `−□⁽⁰⁾` on `m < N` (diagonal scaling by the
/// Jackson weight `q^(−m)`): `(diag, off)` with `off[m]` joining `m` and `m + 1`.
pub fn symmetrized_neg_box0(n: usize, ctx: &NumericContext) -> (Vec<f64>, Vec<f64>) {
    let b = box0_matrix(n, &ctx.q());
    let diag = b.diag.iter().map(|d| -d).collect();
    let off = (0..n.saturating_sub(1)).map(|m| -(b.sup[m] * b.sub[m + 1]).sqrt()).collect();
    (diag, off)
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix,
/// by implicit QL with Wilkinson shifts. `off[i]` couples `i` and `i + 1`.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z0 = vec![0.0; n];
    if n > 0 {
        z0[0] = 1.0;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::RecurrenceBreakdown(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let t = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * t;
                z0[i] = c * z0[i] - s * t;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z0))
}

pub fn spectrum(n: usize, ctx: &NumericContext) -> Result<Spectrum> {
    if n < 8 {
        return Err(Error::CutoffTooSmall { cutoff: n, needed: 8 });
    }
    let (diag, off) = symmetrized_neg_box0(n, ctx);
    let (eigs, first) = tridiagonal_eigen(&diag, &off)?;
    let norm = 1.0 - ctx.q() * ctx.q();
    let mut pairs: Vec<(f64, f64)> = eigs.into_iter().zip(first.into_iter().map(|v| v * v * norm)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (eigs, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(Spectrum { q: ctx.q(), n, c1: eigs[0], c2: eigs[n - 1], eigs, weights })
}

/// `V^(l)` restricted to `k_min ≤ k ≤ k_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VlModule {
    pub l: Complex64,
    pub k_min: i64,
    pub k_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VlGen {
    Xplus,
    Xminus,
    H,
    Omega,
}

fn sh_ratio(x: Complex64, ctx: &NumericContext) -> Complex64 {
    let h = ctx.h();
    (x * h / 2.0).sinh() / (h / 2.0).sinh()
}

/// `X⁺e_k = sh((k − l)h/2)/sh(h/2) e_(k+1)`.
pub fn ladder_plus(l: Complex64, k: i64, ctx: &NumericContext) -> Complex64 {
    sh_ratio(Complex64::new(k as f64, 0.0) - l, ctx)
}

/// `X⁻e_k = −sh((k + l)h/2)/sh(h/2) e_(k−1)`.
pub fn ladder_minus(l: Complex64, k: i64, ctx: &NumericContext) -> Complex64 {
    -sh_ratio(Complex64::new(k as f64, 0.0) + l, ctx)
}

/// Image of `e_k` under a generator, as `(index, coefficient)` pairs.
pub fn vl_action(module: &VlModule, gen: VlGen, k: i64, ctx: &NumericContext) -> Result<Vec<(i64, Complex64)>> {
    let (lo, hi) = (module.k_min, module.k_max);
    let check = |i: i64| if i < lo || i > hi { Err(Error::BoundaryIndex { k: i, lo, hi }) } else { Ok(()) };
    check(k)?;
    let l = module.l;
    match gen {
        VlGen::H => Ok(vec![(k, Complex64::new(2.0 * k as f64, 0.0))]),
        VlGen::Xplus => {
            check(k + 1)?;
            Ok(vec![(k + 1, ladder_plus(l, k, ctx))])
        }
        VlGen::Xminus => {
            check(k - 1)?;
            Ok(vec![(k - 1, ladder_minus(l, k, ctx))])
        }
        VlGen::Omega => {
            // X⁻X⁺ + sh(Hh/4) sh((H+2)h/4)/sh²(h/2) with H = 2k. Both products grow like
            // e^((2k+1)h/2); written as ch-differences the growing parts cancel exactly.
            let h = ctx.h();
            let s = (h / 2.0).sinh();
            let c = (((2.0 * l + 1.0) * h / 2.0).cosh() - (h / 2.0).cosh()) / (2.0 * s * s);
            Ok(vec![(k, c)])
        }
    }
}

/// Numeric generator coefficients on `z^j f0 z*^k`, up to index `n`.
struct NumCoeffs {
    e_z: Vec<f64>,
    e_zs: Vec<f64>,
    f_z: Vec<f64>,
    f_zs: Vec<f64>,
    q2pow: Vec<f64>,
    poch: Vec<f64>,
    f0_e: f64,
    f0_f: f64,
}

impl NumCoeffs {
    fn new(n: usize, ctx: &NumericContext) -> Result<Self> {
        let ev = |x: ExactScalar| x.eval(ctx);
        let mut c = NumCoeffs {
            e_z: Vec::with_capacity(n),
            e_zs: Vec::with_capacity(n),
            f_z: Vec::with_capacity(n),
            f_zs: Vec::with_capacity(n),
            q2pow: Vec::with_capacity(n),
            poch: Vec::with_capacity(n),
            f0_e: ev(f0_e())?,
            f0_f: ev(f0_f())?,
        };
        let q2 = ctx.q() * ctx.q();
        let (mut p, mut qp) = (1.0, 1.0);
        for i in 0..n {
            // closed forms of the geometric sums in `coeffs`
            c.e_z.push(-ctx.q().sqrt() * (1.0 - q2.powi(i as i32)) / (1.0 - q2));
            c.e_zs.push(ctx.q().powf(-1.5) * (q2.powi(-(i as i32)) - 1.0) / (1.0 / q2 - 1.0));
            c.f_z.push(ctx.q().sqrt() * (q2.powi(-(i as i32)) - 1.0) / (1.0 / q2 - 1.0));
            c.f_zs.push(-ctx.q().powf(2.5) * (1.0 - q2.powi(i as i32)) / (1.0 - q2));
            c.q2pow.push(qp);
            c.poch.push(p);
            qp *= q2;
            p *= 1.0 - qp;
        }
        Ok(c)
    }
}

type NumFin = BTreeMap<(u32, u32), Complex64>;

fn num_add(f: &mut NumFin, key: (u32, u32), v: Complex64) {
    *f.entry(key).or_insert(Complex64::zero()) += v;
}

fn num_act_e(f: &NumFin, c: &NumCoeffs) -> NumFin {
    let mut r = NumFin::new();
    for (&(j, k), v) in f {
        let kj = c.q2pow[j as usize];
        num_add(&mut r, (j + 1, k), v * (c.e_z[j as usize] + kj * c.f0_e));
        if k > 0 {
            num_add(&mut r, (j, k - 1), v * (kj * c.e_zs[k as usize]));
        }
    }
    r
}

fn num_act_f(f: &NumFin, c: &NumCoeffs) -> NumFin {
    let mut r = NumFin::new();
    for (&(j, k), v) in f {
        let kk = c.q2pow[k as usize];
        if j > 0 {
            num_add(&mut r, (j - 1, k), v * (c.f_z[j as usize] * kk));
        }
        num_add(&mut r, (j, k + 1), v * (kk * c.f0_f + c.f_zs[k as usize]));
    }
    r
}

fn num_act_k(f: &NumFin, n: i32, ctx: &NumericContext) -> NumFin {
    f.iter().map(|(&(j, k), v)| ((j, k), v * ctx.q().powi(2 * n * (j as i32 - k as i32)))).collect()
}

/// Layer `layer` with values `ψ(q^(2m))`, as finite-function coefficients.
fn layer_to_fin(layer: i64, vals: &[Complex64], c: &NumCoeffs) -> NumFin {
    let mut f = NumFin::new();
    for (m, v) in vals.iter().enumerate() {
        let key = if layer >= 0 {
            (m as u32 + layer as u32, m as u32)
        } else {
            (m as u32, m as u32 + layer.unsigned_abs() as u32)
        };
        f.insert(key, v / c.poch[m]);
    }
    f
}

/// Layer-`layer` profile of `f`, on `m < n`.
fn fin_layer(f: &NumFin, layer: i64, n: usize, c: &NumCoeffs) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); n];
    for (&(a, b), v) in f {
        if a as i64 - b as i64 == layer {
            let m = a.min(b) as usize;
            if m < n {
                out[m] += v * c.poch[m];
            }
        }
    }
    out
}

fn num_fin_mul(f: &NumFin, g: &NumFin, c: &NumCoeffs) -> NumFin {
    let mut by_left: BTreeMap<u32, Vec<(u32, Complex64)>> = BTreeMap::new();
    for (&(a, b), v) in g {
        by_left.entry(a).or_default().push((b, *v));
    }
    let mut r = NumFin::new();
    for (&(j, k), v) in f {
        if let Some(row) = by_left.get(&k) {
            for &(b, w) in row {
                num_add(&mut r, (j, b), v * w * c.poch[k as usize]);
            }
        }
    }
    r
}

fn num_nu(f: &NumFin, ctx: &NumericContext, c: &NumCoeffs) -> Complex64 {
    let q2 = ctx.q() * ctx.q();
    let psi0 = fin_layer(f, 0, c.poch.len(), c);
    let s: Complex64 = psi0.iter().enumerate().map(|(m, v)| v * q2.powi(-(m as i32))).sum();
    s * (1.0 - q2)
}

/// Working size for numeric coefficient tables.
fn table_size(n: usize, k_max: i64) -> usize {
    n + 2 * k_max.unsigned_abs() as usize + 4
}

fn check_simple(p: &SpectralParam, k_max: i64, ctx: &NumericContext) -> Result<()> {
    for k in -k_max..=k_max {
        for (z, sign) in [(ladder_plus(p.l, k, ctx), "−"), (ladder_minus(p.l, k, ctx), "+")] {
            if z.norm() < 1e-14 {
                return Err(Error::DegenerateParameter { l: format!("{} (k {sign} l)", p.l), k });
            }
        }
    }
    Ok(())
}

/// `i^(l)e_k` for `|k| ≤ k_max` as layer-`k` profiles on `m < N`, from `i^(l)e_0 = Φ_l`,
/// `X⁺ = q^(−k) E` and `X⁻ = q^(k−1) F` on layer `k`. Values near the window edge
/// inherit the truncation of `Φ_l`.
pub fn embed_il(
    p: &SpectralParam,
    k_max: i64,
    n: usize,
    ctx: &NumericContext,
) -> Result<BTreeMap<i64, RadialFn<Complex64>>> {
    check_simple(p, k_max, ctx)?;
    let c = NumCoeffs::new(table_size(n, k_max), ctx)?;
    let q = ctx.q();
    let phi = phi_l(p, n, ctx)?;
    let mut out = BTreeMap::new();
    out.insert(0, phi.clone());
    let mut cur = phi.values.clone();
    for k in 0..k_max {
        let e = num_act_e(&layer_to_fin(k, &cur, &c), &c);
        let coef = q.powi(-(k as i32)) / ladder_plus(p.l, k, ctx);
        cur = fin_layer(&e, k + 1, n, &c).into_iter().map(|v| v * coef).collect();
        out.insert(k + 1, RadialFn::new(cur.clone()));
    }
    let mut cur = phi.values;
    for k in (-k_max + 1..=0).rev() {
        let f = num_act_f(&layer_to_fin(k, &cur, &c), &c);
        let coef = q.powi(k as i32 - 1) / ladder_minus(p.l, k, ctx);
        cur = fin_layer(&f, k - 1, n, &c).into_iter().map(|v| v * coef).collect();
        out.insert(k - 1, RadialFn::new(cur.clone()));
    }
    Ok(out)
}

/// `Ω` applied to a layer-`layer` profile, through the numeric `E`, `F`, `K` actions.
pub fn omega_on_layer(layer: i64, vals: &[Complex64], ctx: &NumericContext) -> Result<Vec<Complex64>> {
    let n = vals.len();
    let c = NumCoeffs::new(table_size(n, layer + 2), ctx)?;
    let f = layer_to_fin(layer, vals, &c);
    let mut total = NumFin::new();
    for (m, coef) in casimir().terms() {
        let mut t = f.clone();
        for _ in 0..m.e {
            t = num_act_e(&t, &c);
        }
        t = num_act_k(&t, m.k, ctx);
        for _ in 0..m.f {
            t = num_act_f(&t, &c);
        }
        let w = coef.eval(ctx)?;
        for (key, v) in t {
            num_add(&mut total, key, v * w);
        }
    }
    Ok(fin_layer(&total, layer, n, &c))
}

/// The pairings `(j^(l)f, e_k) = ∫ (i^(l)e_k)* f dν`, indexed `k = −k_max..=k_max`.
pub fn project_jl(
    p: &SpectralParam,
    f: &FinElement,
    k_max: i64,
    n: usize,
    ctx: &NumericContext,
) -> Result<Vec<Complex64>> {
    let emb = embed_il(p, k_max, n, ctx)?;
    let c = NumCoeffs::new(table_size(n, k_max), ctx)?;
    let mut g = NumFin::new();
    for (&(j, k), v) in f.terms() {
        g.insert((j, k), Complex64::new(v.eval(ctx)?, 0.0));
    }
    let mut out = Vec::with_capacity(2 * k_max as usize + 1);
    for k in -k_max..=k_max {
        let conj: Vec<Complex64> = emb[&k].values.iter().map(|v| v.conj()).collect();
        // (i e_k)* lives in layer −k with conjugated values
        let star = layer_to_fin(-k, &conj, &c);
        out.push(num_nu(&num_fin_mul(&star, &g, &c), ctx, &c));
    }
    Ok(out)
}

/// `uf(l) = q² ∫₁^∞ conj(Φ_l) f d_(q⁻²)x` at each sampled `l`.
pub fn transform_u<T: Clone + Into<Complex64>>(
    f: &RadialFn<T>,
    samples: &[SpectralParam],
    n: usize,
    ctx: &NumericContext,
) -> Result<Vec<Complex64>> {
    let q2 = ctx.q() * ctx.q();
    let n = n.max(f.values.len());
    samples
        .iter()
        .map(|p| {
            let phi = phi_l(p, n, ctx)?;
            let s: Complex64 = f
                .values
                .iter()
                .enumerate()
                .map(|(m, v)| phi.values[m].conj() * v.clone().into() * q2.powi(-(m as i32)))
                .sum();
            Ok(s * (1.0 - q2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::coeffs;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qx() -> ExactScalar {
        ExactScalar::q()
    }

    fn e(n: i64) -> ExactScalar {
        ExactScalar::q_pow(n)
    }

    fn one() -> ExactScalar {
        ExactScalar::one()
    }

    fn ctx() -> NumericContext {
        NumericContext::new(0.5).unwrap()
    }

    fn arb_radial(n: usize) -> impl Strategy<Value = RadialFn<ExactScalar>> {
        prop::collection::vec(crate::polalg::tests::arb_coeff(), n).prop_map(RadialFn::new)
    }

    #[test]
    fn q_diff_examples() {
        let ones = RadialFn::new(vec![one(); 6]);
        let d = q_diff(&ones, &qx());
        assert!(d.values[..5].iter().all(|v| v.is_zero()));
        assert_eq!(d.parity, 1);
        let delta0 = RadialFn::<ExactScalar>::delta(0, 4);
        assert_eq!(q_diff_at(&delta0, 1, &qx()), one() / ((e(-1) - e(1)) * e(1)));
        let t = RadialFn::new((0..6).map(|m| e(-2 * m)).collect());
        assert!(q_diff(&t, &qx()).values[..5].iter().all(|v| v.is_one()));
        assert_eq!(q_diff(&q_diff(&t, &qx()), &qx()).parity, 0);
    }

    #[test]
    fn box0_of_delta0_column() {
        let b = box0(&RadialFn::delta(0, 4), &qx());
        let w = one() - e(2);
        assert_eq!(b.values, vec![-(one() / &w), e(2) / &w, ExactScalar::zero(), ExactScalar::zero()]);
        let c = casimir_radial(&RadialFn::delta(0, 4), &qx());
        let d = e(-1) - e(1);
        assert_eq!(c.values[0], -(one() / &d));
        assert_eq!(c.values[1], e(2) / &d);
    }

    #[test]
    fn box0_annihilates_constants_and_matches_matrix() {
        let n = 7;
        let b = box0(&RadialFn::new(vec![one(); n]), &qx());
        assert!(b.values[..n - 1].iter().all(|v| v.is_zero()));
        let m = box0_matrix(n, &qx());
        for k in 0..n {
            let d = RadialFn::delta(k, n);
            assert_eq!(box0(&d, &qx()), m.apply(&d));
        }
        let col = box0(&RadialFn::delta(1, n), &qx());
        assert_eq!(col.values.iter().filter(|v| !v.is_zero()).count(), 3);
    }

    #[test]
    fn dbar_examples() {
        let n = 5;
        assert!(dbar_radial(&RadialFn::new(vec![one(); n]), &qx()).values[..n - 1].iter().all(|v| v.is_zero()));
        let y = RadialFn::new((0..n as i64).map(|m| e(2 * m)).collect());
        assert!(dbar_radial(&y, &qx()).values[..n - 1].iter().all(|v| *v == -one()));
        let d = dbar_radial(&RadialFn::delta(0, n), &qx());
        assert_eq!(d.values.iter().filter(|v| !v.is_zero()).count(), 1);
    }

    #[test]
    fn norm_examples() {
        let (n2, d2) = norms(&RadialFn::<ExactScalar>::delta(0, 4), &qx());
        assert_eq!(n2, one() - e(2));
        assert_eq!(d2, one());
        let (a, b) = norms(&RadialFn::<ExactScalar>::zeros(4), &qx());
        assert!(a.is_zero() && b.is_zero());
        assert_eq!(q_integral(&RadialFn::<ExactScalar>::delta(0, 3), IntegralKind::Ray, &qx()), e(-2) - one());
    }

    #[test]
    fn integration_by_parts_on_the_line() {
        // ∫ u1 (B₋u2) d_(q²)x = −q² ∫ (B₊u1) u2 d_(q²)x over the lattice x = q^(−2m),
        // with B_± f(t) = (f(t) − f(q^(±2)t))/(t − q^(±2)t) and u vanishing for x < 1
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 10;
            let mk = |rng: &mut ChaCha8Rng| {
                let mut v: Vec<ExactScalar> = (0..n).map(|_| ExactScalar::from_int(rng.gen_range(-4..=4))).collect();
                v[n - 1] = ExactScalar::zero();
                v[n - 2] = ExactScalar::zero();
                RadialFn::new(v)
            };
            let (u1, u2) = (mk(&mut rng), mk(&mut rng));
            let x = |m: i64| e(-2 * m);
            let bminus =
                RadialFn::new((0..n as i64).map(|m| (u2.get(m + 1) - u2.get(m)) / (x(m + 1) - x(m))).collect());
            let bplus = RadialFn::new((0..n as i64).map(|m| (u1.get(m) - u1.get(m - 1)) / (x(m) - x(m - 1))).collect());
            let prod = |a: &RadialFn<ExactScalar>, b: &RadialFn<ExactScalar>| {
                RadialFn::new((0..n as i64).map(|m| a.get(m) * b.get(m)).collect())
            };
            let lhs = q_integral(&prod(&u1, &bminus), IntegralKind::Line, &qx());
            let rhs = -(e(2) * q_integral(&prod(&bplus, &u2), IntegralKind::Line, &qx()));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lambda_examples() {
        let c = ctx();
        let p = |l: f64| SpectralParam { l: Complex64::new(l, 0.0), zone: Zone::Other };
        assert_abs_diff_eq!(lambda_of_l(&p(0.0), &c).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambda_of_l(&p(-1.0), &c).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambda_of_l(&p(-0.5), &c).re, -4.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn lambda_reflection_symmetry() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let l = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0));
            let a = lambda_omega(l, &c);
            let b = lambda_omega(-1.0 - l, &c);
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn classify_examples() {
        let c = ctx();
        let h = c.h();
        assert_eq!(classify_l(Complex64::new(-0.25, 0.0), &c).zone, Zone::L1);
        assert_eq!(classify_l(Complex64::new(-0.5, PI / (2.0 * h)), &c).zone, Zone::L2);
        let p = classify_l(Complex64::new(-0.75, 0.0), &c);
        assert_eq!(p.zone, Zone::L1);
        assert_abs_diff_eq!(p.l.re, -0.25, epsilon = 1e-15);
        let p = classify_l(Complex64::new(-0.5, -0.3), &c);
        assert_eq!(p.zone, Zone::L2);
        assert_abs_diff_eq!(p.l.im, 0.3, epsilon = 1e-15);
        assert_eq!(classify_l(Complex64::new(0.2, PI / h), &c).zone, Zone::L3);
        assert_eq!(classify_l(Complex64::new(-1.2, PI / h), &c).zone, Zone::L3);
        let shifted = classify_l(Complex64::new(-0.5, 0.3 + 2.0 * PI / h), &c);
        assert_abs_diff_eq!(shifted.l.im, 0.3, epsilon = 1e-12);
        assert_eq!(classify_l(Complex64::new(0.5, 0.0), &c).zone, Zone::Other);
    }

    #[test]
    fn phi_examples() {
        let c = ctx();
        for l in [0.0, -1.0] {
            let p = classify_l(Complex64::new(l, 0.0), &c);
            let phi = phi_l(&p, 20, &c).unwrap();
            assert!(phi.values.iter().all(|v| (v - 1.0).norm() < 1e-12));
        }
        let p = classify_l(Complex64::new(-0.5, 0.3), &c);
        let phi = phi_l(&p, 64, &c).unwrap();
        assert!(phi_residual(&phi, lambda_of_l(&p, &c), &c) < 1e-10);
    }

    #[test]
    fn spectrum_small_matches_dense_solver() {
        let c = ctx();
        let n = 60;
        let s = spectrum(n, &c).unwrap();
        let (diag, off) = symmetrized_neg_box0(n, &c);
        let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        let dense = nalgebra::SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, f64)> =
            (0..n).map(|i| (dense.eigenvalues[i], dense.eigenvectors[(0, i)].powi(2) * 0.75)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, (ev, w)) in pairs.iter().enumerate() {
            assert_abs_diff_eq!(s.eigs[i], *ev, epsilon = 1e-10);
            assert_abs_diff_eq!(s.weights[i], *w, epsilon = 1e-10);
        }
    }

    #[test]
    fn symmetrization_preserves_action() {
        // S B S⁻¹ with S = diag(q^(−m)) is symmetric
        let c = ctx();
        let n = 12;
        let b = box0_matrix(n, &c.q());
        let (_, off) = symmetrized_neg_box0(n, &c);
        for m in 0..n - 1 {
            let s = c.q().powi(-(m as i32));
            let s1 = c.q().powi(-(m as i32 + 1));
            assert_abs_diff_eq!(-b.sup[m] * s / s1, off[m], epsilon = 1e-12);
            assert_abs_diff_eq!(-b.sub[m + 1] * s1 / s, off[m], epsilon = 1e-12);
        }
    }

    #[test]
    fn vl_examples() {
        let c = ctx();
        let l = Complex64::new(-0.5, 0.4);
        let module = VlModule { l, k_min: -5, k_max: 5 };
        assert_eq!(vl_action(&module, VlGen::H, 3, &c).unwrap(), vec![(3, Complex64::new(6.0, 0.0))]);
        let xp = vl_action(&module, VlGen::Xplus, 0, &c).unwrap();
        let h = c.h();
        assert_eq!(xp[0].0, 1);
        assert!((xp[0].1 + (l * h / 2.0).sinh() / (h / 2.0).sinh()).norm() < 1e-14);
        assert!(matches!(vl_action(&module, VlGen::Xplus, 5, &c), Err(Error::BoundaryIndex { .. })));
    }

    #[test]
    fn vl_commutator() {
        // [X⁺, X⁻] e_k = sh(kh)/sh(h/2) e_k
        let c = ctx();
        let h = c.h();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let l = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0));
            let k = rng.gen_range(-10..10);
            let pm = ladder_minus(l, k, &c) * ladder_plus(l, k - 1, &c);
            let mp = ladder_plus(l, k, &c) * ladder_minus(l, k + 1, &c);
            let expect = (k as f64 * h).sinh() / (h / 2.0).sinh();
            assert!((pm - mp - expect).norm() < 1e-12 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn vl_omega_matches_ladder_composition() {
        let c = ctx();
        let module = VlModule { l: Complex64::new(-0.5, 0.9), k_min: -20, k_max: 20 };
        for k in -20..20 {
            let kk = Complex64::new(k as f64, 0.0);
            let up = ladder_plus(module.l, k, &c) * ladder_minus(module.l, k + 1, &c);
            let cartan = sh_ratio(kk, &c) * sh_ratio(kk + 1.0, &c);
            let got = vl_action(&module, VlGen::Omega, k, &c).unwrap()[0].1;
            let scale = up.norm().max(cartan.norm()).max(1.0);
            assert!((got - up - cartan).norm() < 1e-13 * scale, "k = {k}");
        }
    }

    #[test]
    fn embedding_examples() {
        let c = ctx();
        let p = classify_l(Complex64::new(-0.5, 0.7), &c);
        let n = 48;
        let k_max = 3;
        let emb = embed_il(&p, k_max, n, &c).unwrap();
        assert_eq!(emb[&0], phi_l(&p, n, &c).unwrap());
        let lam = lambda_omega(p.l, &c);
        for k in -k_max..=k_max {
            let v = &emb[&k].values;
            let w = omega_on_layer(k, v, &c).unwrap();
            let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let interior = n - 2 * k_max as usize - 4;
            for m in 0..interior {
                assert!((w[m] - lam * v[m]).norm() < 1e-8 * scale.max(1.0), "k={k} m={m}");
            }
        }
        // X⁻ i(e_1) recovers Φ on the interior
        let back = embed_il(&p, 1, n, &c).unwrap();
        let cf = NumCoeffs::new(table_size(n, 1), &c).unwrap();
        let f = num_act_f(&layer_to_fin(1, &back[&1].values, &cf), &cf);
        let coef = 1.0 / ladder_minus(p.l, 1, &c);
        let rec = fin_layer(&f, 0, n, &cf);
        for m in 0..n - 4 {
            assert!((rec[m] * coef - back[&0].values[m]).norm() < 1e-9);
        }
    }

    #[test]
    fn numeric_coefficients_match_exact() {
        let c = ctx();
        let t = NumCoeffs::new(12, &c).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        for i in 0..12u32 {
            let i_ = i as usize;
            let ev = |x: ExactScalar| x.eval(&c).unwrap();
            assert!(close(t.e_z[i_], ev(coeffs::e_z(i))));
            assert!(close(t.e_zs[i_], ev(coeffs::e_zs(i))));
            assert!(close(t.f_z[i_], ev(coeffs::f_z(i))));
            assert!(close(t.f_zs[i_], ev(coeffs::f_zs(i))));
            assert!(close(t.poch[i_], ev(crate::polalg::q_pochhammer(i))));
        }
    }

    #[test]
    fn degenerate_parameter_is_reported() {
        let c = ctx();
        let p = SpectralParam { l: Complex64::new(1.0, 0.0), zone: Zone::Other };
        assert!(matches!(embed_il(&p, 2, 16, &c), Err(Error::DegenerateParameter { .. })));
    }

    #[test]
    fn projection_examples() {
        let c = ctx();
        let p = classify_l(Complex64::new(-0.5, 0.9), &c);
        let pr = project_jl(&p, &FinElement::f0(), 2, 40, &c).unwrap();
        assert!((pr[2] - 0.75).norm() < 1e-12);
        for (i, v) in pr.iter().enumerate() {
            if i != 2 {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_intertwines_omega() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = classify_l(Complex64::new(-0.5, 0.45), &c);
        let lam = lambda_omega(p.l, &c);
        for _ in 0..5 {
            let f =
                FinElement::from_terms((0..4).map(|_| {
                    ((rng.gen_range(0..4), rng.gen_range(0..4)), ExactScalar::from_int(rng.gen_range(-3..=3)))
                }));
            let of = act(&casimir(), &FunElement::from(f.clone())).fin;
            let a = project_jl(&p, &of, 2, 40, &c).unwrap();
            let b = project_jl(&p, &f, 2, 40, &c).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - lam * y).norm() < 1e-8, "{x} vs {}", lam * y);
            }
        }
    }

    #[test]
    fn transform_examples() {
        let c = ctx();
        let samples: Vec<SpectralParam> =
            [0.1, 0.5, 1.3].iter().map(|t| classify_l(Complex64::new(-0.5, *t), &c)).collect();
        let u = transform_u(&RadialFn::<f64>::delta(0, 10), &samples, 32, &c).unwrap();
        assert!(u.iter().all(|v| (v - 0.75).norm() < 1e-14));
        let u0 = transform_u(&RadialFn::<f64>::zeros(10), &samples, 32, &c).unwrap();
        assert!(u0.iter().all(|v| v.norm() == 0.0));
        let f = RadialFn::new(vec![0.3, -1.0, 2.0, 0.5, 0.0, 0.0]);
        let bf = box0(&f, &c.q());
        let uf = transform_u(&f, &samples, 32, &c).unwrap();
        let ubf = transform_u(&bf, &samples, 32, &c).unwrap();
        for (i, p) in samples.iter().enumerate() {
            assert!((ubf[i] - lambda_of_l(p, &c) * uf[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn casimir_correspondence_on_deltas() {
        for m in 0..=6 {
            assert!(casimir_matches(&RadialFn::delta(m, m + 1)), "δ_{m}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn form_equality(v in arb_radial(8)) {
            let psi = v.resized(12);
            let (_, d2) = norms(&psi, &qx());
            let neg = box0(&psi, &qx()).scale(&-one());
            prop_assert_eq!(d2, jackson_inner(&neg, &psi, &qx()));
        }

        #[test]
        fn casimir_correspondence_random(v in arb_radial(5)) {
            prop_assert!(casimir_matches(&v));
        }
    }
}
