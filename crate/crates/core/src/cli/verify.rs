//! The exact identity suite behind `qdisc verify`.
//!
//! Every check runs on deterministic low-degree samples so the outcome is reproducible.

use std::collections::BTreeMap;

use crate::discfun::{act_fun, eta, fun_mul, kernel_dim, nu_integral, span_check, FinElement, FunElement};
use crate::hopf::{act_pol, antipode, casimir, coproduct, counit, star_uq, uq_mul, Pbw, UqElement};
use crate::laplace::{box0, casimir_matches, jackson_inner, norms, RadialFn};
use crate::polalg::{normal_mul, PolElement};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// First counterexample, when one was found.
    pub detail: Option<String>,
}

fn check(name: &'static str, r: std::result::Result<(), String>) -> Check {
    Check { name, pass: r.is_ok(), detail: r.err() }
}

fn one() -> ExactScalar {
    ExactScalar::one()
}

fn generators() -> Vec<(&'static str, UqElement)> {
    vec![("E", UqElement::e()), ("F", UqElement::f()), ("K", UqElement::k()), ("Kinv", UqElement::kinv())]
}

fn pbw_upto(deg: u32) -> Vec<Pbw> {
    let mut v = Vec::new();
    for f in 0..=deg {
        for e in 0..=deg - f {
            let rest = (deg - f - e) as i32;
            for k in -rest..=rest {
                v.push(Pbw::new(f, k, e));
            }
        }
    }
    v
}

fn pol_monomials(deg: u32) -> Vec<PolElement> {
    let mut v = Vec::new();
    for j in 0..=deg {
        for k in 0..=deg - j {
            v.push(PolElement::monomial(j, k, one()));
        }
    }
    v
}

fn fin_monomials(max: u32) -> Vec<FinElement> {
    let mut v = Vec::new();
    for j in 0..=max {
        for k in 0..=max {
            v.push(FinElement::term(j, k, one()));
        }
    }
    v
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn tensor3(x: &UqElement, split_left: bool) -> BTreeMap<(Pbw, Pbw, Pbw), ExactScalar> {
    let mut out: BTreeMap<(Pbw, Pbw, Pbw), ExactScalar> = BTreeMap::new();
    for ((a, b), c) in coproduct(x).terms() {
        let split = if split_left { a } else { b };
        for ((u, v), d) in coproduct(&UqElement::monomial(*split, one())).terms() {
            let key = if split_left { (*u, *v, *b) } else { (*a, *u, *v) };
            let e = out.entry(key).or_default();
            *e = &*e + &(c * d);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Defining relations, coassociativity, counit, antipode, multiplicativity of `Δ`.
pub fn hopf_axioms() -> std::result::Result<(), String> {
    let (e, f, k, kinv) = (UqElement::e(), UqElement::f(), UqElement::k(), UqElement::kinv());
    let q2 = ExactScalar::q_pow(2);
    ensure(uq_mul(&k, &kinv) == UqElement::one(), || "K Kinv != 1".into())?;
    ensure(uq_mul(&k, &e) == uq_mul(&e, &k).scale(&q2), || "KE != q^2 EK".into())?;
    ensure(uq_mul(&k, &f).scale(&q2) == uq_mul(&f, &k), || "KF != q^-2 FK".into())?;
    let d = ExactScalar::q() - ExactScalar::q_pow(-1);
    let comm = uq_mul(&e, &f).sub(&uq_mul(&f, &e));
    ensure(comm == k.sub(&kinv).scale(&(one() / d)), || "[E,F] relation fails".into())?;

    for m in pbw_upto(3) {
        let x = UqElement::monomial(m, one());
        ensure(tensor3(&x, true) == tensor3(&x, false), || format!("coassociativity on {m}"))?;
        let dx = coproduct(&x);
        let left = dx.map_legs(|y| UqElement::scalar(counit(y)), UqElement::clone).multiply();
        let right = dx.map_legs(UqElement::clone, |y| UqElement::scalar(counit(y))).multiply();
        ensure(left == x && right == x, || format!("counit axiom on {m}"))?;
        let eps = UqElement::scalar(counit(&x));
        ensure(dx.map_legs(antipode, UqElement::clone).multiply() == eps, || format!("m(S⊗id)Δ on {m}"))?;
        ensure(dx.map_legs(UqElement::clone, antipode).multiply() == eps, || format!("m(id⊗S)Δ on {m}"))?;
    }
    for (na, a) in generators() {
        for (nb, b) in generators() {
            let lhs = coproduct(&uq_mul(&a, &b));
            let rhs = coproduct(&a).mul(&coproduct(&b));
            ensure(lhs == rhs, || format!("Δ({na}{nb}) != Δ({na})Δ({nb})"))?;
        }
    }
    Ok(())
}

/// `(ξf)* = S(ξ)* f*` on Pol and on the finite part.
pub fn star_covariance() -> std::result::Result<(), String> {
    let funs =
        pol_monomials(3).into_iter().map(FunElement::from).chain(fin_monomials(2).into_iter().map(FunElement::from));
    for f in funs {
        for (name, x) in generators() {
            let lhs = act_fun(&x, &f).star();
            let rhs = act_fun(&star_uq(&antipode(&x)), &f.star());
            ensure(lhs == rhs, || format!("{name} on {f}"))?;
        }
    }
    Ok(())
}

/// `ξ(fg) = Σ ξ₁f · ξ₂g`.
pub fn module_algebra_law() -> std::result::Result<(), String> {
    let pols = pol_monomials(2);
    for f in &pols {
        for g in &pols {
            for (name, x) in generators() {
                let lhs = act_pol(&x, &normal_mul(f, g));
                let mut rhs = PolElement::zero();
                for ((a, b), c) in coproduct(&x).terms() {
                    let l = act_pol(&UqElement::monomial(*a, c.clone()), f);
                    let r = act_pol(&UqElement::monomial(*b, one()), g);
                    rhs = rhs.add(&normal_mul(&l, &r));
                }
                ensure(lhs == rhs, || format!("{name} on ({f})({g})"))?;
            }
        }
    }
    let funs: Vec<FunElement> = pol_monomials(1)
        .into_iter()
        .map(FunElement::from)
        .chain(fin_monomials(1).into_iter().map(FunElement::from))
        .collect();
    for f in &funs {
        for g in &funs {
            for (name, x) in generators() {
                let lhs = act_fun(&x, &fun_mul(f, g));
                let mut rhs = FunElement::zero();
                for ((a, b), c) in coproduct(&x).terms() {
                    let l = act_fun(&UqElement::monomial(*a, c.clone()), f);
                    let r = act_fun(&UqElement::monomial(*b, one()), g);
                    rhs = rhs.add(&fun_mul(&l, &r));
                }
                ensure(lhs == rhs, || format!("{name} on ({f})({g})"))?;
            }
        }
    }
    Ok(())
}

/// `η(ξf) = ε(ξ)η(f)` for PBW monomials of degree ≤ 2.
pub fn eta_invariance() -> std::result::Result<(), String> {
    for f in fin_monomials(4) {
        let ef = eta(&f);
        for m in pbw_upto(2) {
            let x = UqElement::monomial(m, one());
            let lhs = eta(&act_fun(&x, &f.clone().into()).fin);
            ensure(lhs == &counit(&x) * &ef, || format!("{m} on {f}"))?;
        }
    }
    Ok(())
}

pub fn nu_is_scaled_eta() -> std::result::Result<(), String> {
    let c = one() - ExactScalar::q_pow(2);
    for f in fin_monomials(5) {
        ensure(nu_integral(&f) == &c * &eta(&f), || format!("ν != (1-q^2)η on {f}"))?;
    }
    Ok(())
}

/// `U_q sl₂ · f0` reaches every `z^i f0 z*^j` with `i, j ≤ 3`.
pub fn f0_generates() -> std::result::Result<(), String> {
    let r = span_check(3, 6);
    ensure(r.contained, || format!("window rank {} of {}", r.window_rank, r.window_dim))
}

/// `{f : z* f = f z = 0}` is one-dimensional.
pub fn kernel_is_f0() -> std::result::Result<(), String> {
    let d = kernel_dim(6);
    ensure(d == 1, || format!("kernel dimension {d}"))
}

/// `Ω` acts on layer 0 as the radial Casimir, on deltas and a few sums of them.
pub fn casimir_radial_basis() -> std::result::Result<(), String> {
    for m in 0..=5 {
        ensure(casimir_matches(&RadialFn::delta(m, m + 1)), || format!("δ_{m}"))?;
    }
    let mixed = RadialFn::new(vec![ExactScalar::from_int(2), -one(), ExactScalar::q_pow(3), one()]);
    ensure(casimir_matches(&mixed), || "mixed profile".into())
}

/// `‖∂̄ψ‖² = ⟨−□ψ, ψ⟩` on finitely supported profiles.
pub fn form_equality() -> std::result::Result<(), String> {
    let q = ExactScalar::q();
    let profiles = (0..6).map(|m| RadialFn::delta(m, 10)).chain([
        RadialFn::new(vec![one(), -one(), ExactScalar::from_int(3)]).resized(10),
        RadialFn::new(vec![ExactScalar::zero(), ExactScalar::q_pow(-1), one() - ExactScalar::q_pow(2)]).resized(10),
    ]);
    for (i, psi) in profiles.enumerate() {
        let (_, d2) = norms(&psi, &q);
        let neg = box0(&psi, &q).scale(&-one());
        ensure(d2 == jackson_inner(&neg, &psi, &q), || format!("profile #{i}"))?;
    }
    Ok(())
}

/// `Ω` commutes with the generators in the algebra.
pub fn casimir_central() -> std::result::Result<(), String> {
    let om = casimir();
    for (name, x) in generators() {
        ensure(uq_mul(&om, &x) == uq_mul(&x, &om), || format!("[Ω, {name}] != 0"))?;
    }
    Ok(())
}

pub fn run_suite() -> Vec<Check> {
    vec![
        check("hopf-axioms", hopf_axioms()),
        check("casimir-central", casimir_central()),
        check("star-covariance", star_covariance()),
        check("module-algebra", module_algebra_law()),
        check("eta-invariance", eta_invariance()),
        check("nu-equals-scaled-eta", nu_is_scaled_eta()),
        check("f0-generates", f0_generates()),
        check("kernel-is-f0", kernel_is_f0()),
        check("casimir-radial", casimir_radial_basis()),
        check("form-equality", form_equality()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for c in run_suite() {
            assert!(c.pass, "{}: {:?}", c.name, c.detail);
        }
    }
}
