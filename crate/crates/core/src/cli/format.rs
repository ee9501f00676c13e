//! Element parsing and the text / JSON serializations.

use serde_json::{json, Map, Value};

use crate::discfun::{FinElement, FunElement};
use crate::error::{Error, Result};
use crate::expr::{eval, parse, parse_scalar};
use crate::hopf::{Pbw, UqElement};
use crate::laplace::RadialFn;
use crate::polalg::PolElement;
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Fun,
    Uq,
    Radial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Fun(FunElement),
    Uq(UqElement),
    Radial(RadialFn<ExactScalar>),
}

/// Parses an expression, a JSON element, or (radial only) a bracketed list of scalars.
pub fn parse_expr(src: &str, kind: Kind) -> Result<Element> {
    let t = src.trim_start();
    let json_like = t.starts_with('{') || (kind == Kind::Uq && t.starts_with('['));
    if json_like {
        let v: Value = serde_json::from_str(src).map_err(|e| Error::Format(e.to_string()))?;
        return from_json(&v, kind);
    }
    match kind {
        Kind::Fun => Ok(Element::Fun(eval(&parse(src)?)?)),
        Kind::Uq => Ok(Element::Uq(eval(&parse(src)?)?)),
        Kind::Radial => Ok(Element::Radial(parse_radial_list(src)?)),
    }
}

pub fn parse_fun(src: &str) -> Result<FunElement> {
    match parse_expr(src, Kind::Fun)? {
        Element::Fun(f) => Ok(f),
        _ => unreachable!(),
    }
}

pub fn parse_uq(src: &str) -> Result<UqElement> {
    match parse_expr(src, Kind::Uq)? {
        Element::Uq(x) => Ok(x),
        _ => unreachable!(),
    }
}

pub fn parse_radial(src: &str) -> Result<RadialFn<ExactScalar>> {
    match parse_expr(src, Kind::Radial)? {
        Element::Radial(r) => Ok(r),
        _ => unreachable!(),
    }
}

/// `[a, b, …]`: values at `m = 0, 1, …` on the integer lattice.
fn parse_radial_list(src: &str) -> Result<RadialFn<ExactScalar>> {
    let open = src.find('[').ok_or(Error::Syntax { offset: 0, msg: "expected `[`".into() })?;
    if !src[..open].trim().is_empty() {
        return Err(Error::Syntax { offset: 0, msg: "expected `[`".into() });
    }
    let close = src.rfind(']').ok_or(Error::Syntax { offset: src.len(), msg: "expected `]`".into() })?;
    if !src[close + 1..].trim().is_empty() {
        return Err(Error::Syntax { offset: close + 1, msg: "trailing input after `]`".into() });
    }
    let body = &src[open + 1..close];
    if body.trim().is_empty() {
        return Ok(RadialFn::new(Vec::new()));
    }
    let mut values = Vec::new();
    let mut start = open + 1;
    for piece in body.split(',') {
        let v = parse_scalar(piece).map_err(|e| shift_offset(e, start))?;
        values.push(v);
        start += piece.len() + 1;
    }
    Ok(RadialFn::new(values))
}

fn shift_offset(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { offset, msg } => Error::Syntax { offset: offset + by, msg },
        Error::UnknownToken { offset, token } => Error::UnknownToken { offset: offset + by, token },
        Error::MixedKind { offset, token, kind } => Error::MixedKind { offset: offset + by, token, kind },
        other => other,
    }
}

fn scalar_json(c: &ExactScalar) -> Value {
    Value::String(c.to_string())
}

fn scalar_from_json(v: &Value) -> Result<ExactScalar> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => n
            .as_i64()
            .map(ExactScalar::from_int)
            .ok_or_else(|| Error::Format(format!("coefficient {n} is not an integer; give it as a string"))),
        other => Err(Error::Format(format!("expected a scalar, got {other}"))),
    }
}

fn index_from_json(obj: &Map<String, Value>, key: &str) -> Result<u32> {
    obj.get(key)
        .and_then(Value::as_u64)
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Format(format!("missing or invalid index `{key}`")))
}

fn terms_json<'a>(it: impl Iterator<Item = (&'a (u32, u32), &'a ExactScalar)>) -> Value {
    Value::Array(it.map(|(&(j, k), c)| json!({"j": j, "k": k, "c": scalar_json(c)})).collect())
}

pub fn fun_to_json(f: &FunElement) -> Value {
    json!({"pol": terms_json(f.pol.terms()), "fin": terms_json(f.fin.terms())})
}

fn jk_terms(v: Option<&Value>) -> Result<Vec<((u32, u32), ExactScalar)>> {
    let Some(v) = v else {
        return Ok(Vec::new());
    };
    let arr = v.as_array().ok_or_else(|| Error::Format("expected an array of terms".into()))?;
    arr.iter()
        .map(|t| {
            let o = t.as_object().ok_or_else(|| Error::Format("term must be an object".into()))?;
            let c = o.get("c").ok_or_else(|| Error::Format("term without `c`".into()))?;
            Ok(((index_from_json(o, "j")?, index_from_json(o, "k")?), scalar_from_json(c)?))
        })
        .collect()
}

pub fn fun_from_json(v: &Value) -> Result<FunElement> {
    let o = v.as_object().ok_or_else(|| Error::Format("expected an object".into()))?;
    Ok(FunElement::new(
        PolElement::from_terms(jk_terms(o.get("pol"))?),
        FinElement::from_terms(jk_terms(o.get("fin"))?),
    ))
}

pub fn uq_to_json(x: &UqElement) -> Value {
    Value::Array(x.terms().map(|(m, c)| json!({"a": m.f, "b": m.k, "c": m.e, "coef": scalar_json(c)})).collect())
}

pub fn uq_from_json(v: &Value) -> Result<UqElement> {
    let arr = v.as_array().ok_or_else(|| Error::Format("expected a list of PBW terms".into()))?;
    let terms = arr
        .iter()
        .map(|t| {
            let o = t.as_object().ok_or_else(|| Error::Format("term must be an object".into()))?;
            let b = o
                .get("b")
                .and_then(Value::as_i64)
                .and_then(|n| i32::try_from(n).ok())
                .ok_or_else(|| Error::Format("missing or invalid `b`".into()))?;
            let c = o.get("coef").ok_or_else(|| Error::Format("term without `coef`".into()))?;
            Ok((Pbw::new(index_from_json(o, "a")?, b, index_from_json(o, "c")?), scalar_from_json(c)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UqElement::from_terms(terms))
}

pub fn radial_to_json(r: &RadialFn<ExactScalar>) -> Value {
    json!({"parity": r.parity, "values": r.values.iter().map(scalar_json).collect::<Vec<_>>()})
}

pub fn radial_numeric_json(r: &RadialFn<f64>) -> Value {
    json!({"parity": r.parity, "values": r.values})
}

pub fn radial_from_json(v: &Value) -> Result<RadialFn<ExactScalar>> {
    let parity = match v.get("parity") {
        None => 0,
        Some(p) => match p.as_u64() {
            Some(p @ (0 | 1)) => p as u8,
            _ => return Err(Error::Format("parity must be 0 or 1".into())),
        },
    };
    let arr = v
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("expected {\"values\": [...]}".into()))?;
    let values = arr.iter().map(scalar_from_json).collect::<Result<Vec<_>>>()?;
    Ok(RadialFn { values, parity })
}

fn from_json(v: &Value, kind: Kind) -> Result<Element> {
    Ok(match kind {
        Kind::Fun => Element::Fun(fun_from_json(v)?),
        Kind::Uq => Element::Uq(uq_from_json(v)?),
        Kind::Radial => Element::Radial(radial_from_json(v)?),
    })
}

pub fn radial_text(r: &RadialFn<ExactScalar>) -> String {
    let parts: Vec<String> = r.values.iter().map(ExactScalar::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn to_json(el: &Element) -> Value {
    match el {
        Element::Fun(f) => fun_to_json(f),
        Element::Uq(x) => uq_to_json(x),
        Element::Radial(r) => radial_to_json(r),
    }
}

pub fn to_text(el: &Element) -> String {
    match el {
        Element::Fun(f) => f.to_string(),
        Element::Uq(x) => x.to_string(),
        Element::Radial(r) => radial_text(r),
    }
}

/// Deterministic rendering; JSON keys keep a fixed insertion order.
pub fn serialize(el: &Element, format: Format) -> String {
    match format {
        Format::Text => to_text(el),
        Format::Json => to_json(el).to_string(),
    }
}

/// Twelve significant digits, trailing zeros dropped.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discfun::tests::arb_fun;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let q2 = ExactScalar::q_pow(2);
        let f = parse_fun("z' * z").unwrap();
        let expected =
            FunElement::from(PolElement::from_terms([((1, 1), q2.clone()), ((0, 0), ExactScalar::one() - q2)]));
        assert_eq!(f, expected);
        assert!(parse_fun("z' * f0").unwrap().is_zero());
        assert!(matches!(parse_expr("z*E", Kind::Fun), Err(Error::MixedKind { offset: 2, .. })));
        assert!(matches!(parse_expr("z*w", Kind::Fun), Err(Error::UnknownToken { offset: 2, .. })));
        assert!(matches!(parse_expr("z z'", Kind::Fun), Err(Error::Syntax { .. })));
        let x = parse_uq("E*F - F*E").unwrap();
        let d = ExactScalar::q() - ExactScalar::q_pow(-1);
        assert_eq!(x, UqElement::k().sub(&UqElement::kinv()).scale(&(ExactScalar::one() / d)));
    }

    #[test]
    fn radial_lists() {
        let r = parse_radial("[1, 1-q^2, 0]").unwrap();
        assert_eq!(r.values.len(), 3);
        assert_eq!(r.values[1], ExactScalar::one() - ExactScalar::q_pow(2));
        assert!(matches!(parse_radial("[1, z]"), Err(Error::MixedKind { offset: 4, .. })));
        assert!(matches!(parse_radial("[1, 2, w]"), Err(Error::UnknownToken { offset: 7, .. })));
        assert!(parse_radial("[]").unwrap().is_empty());
    }

    #[test]
    fn serialize_examples() {
        let f = parse_fun("z'*z").unwrap();
        assert_eq!(serialize(&Element::Fun(f), Format::Text), "q^2*z*z' + (1-q^2)");
        assert_eq!(serialize(&Element::Fun(FunElement::zero()), Format::Json), r#"{"pol":[],"fin":[]}"#);
    }

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(0.444444444444444), "0.444444444444");
        assert_eq!(fmt_num(4.0), "4");
        assert_eq!(fmt_num(-0.75), "-0.75");
        assert_eq!(fmt_num(1.5e-9), "1.50000000000e-9");
    }

    #[test]
    fn uq_json_round_trip() {
        let x = parse_uq("E*F + q*Kinv - 3").unwrap();
        let s = serialize(&Element::Uq(x.clone()), Format::Json);
        assert!(s.starts_with(r#"[{"a":"#));
        assert_eq!(parse_uq(&s).unwrap(), x);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn text_round_trip(f in arb_fun(3)) {
            let el = Element::Fun(f);
            prop_assert_eq!(parse_expr(&serialize(&el, Format::Text), Kind::Fun).unwrap(), el);
        }

        #[test]
        fn json_round_trip(f in arb_fun(3)) {
            let el = Element::Fun(f);
            prop_assert_eq!(parse_expr(&serialize(&el, Format::Json), Kind::Fun).unwrap(), el);
        }
    }
}
