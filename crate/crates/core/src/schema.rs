//! JSON encodings for the exact objects.
//!
//! Rationals are strings `"p/q"` (plain `"p"` when the denominator is 1),
//! big integers are decimal strings, matrices are row-major arrays.  Writers
//! emit canonical forms, so parse→write round-trips are byte-identical on
//! canonical input.  Parse errors carry a JSON-pointer path.

use num::{BigInt, One, Zero};
use serde_json::{json, Map, Value};
use std::str::FromStr;

use crate::bruhat::MElement;
use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::heisenberg::HeisElement;
use crate::lattice::QLattice;
use crate::normfactor::{NormFactor, Scalar};
use crate::qmat::QMat;
use crate::rational::Rat;
use crate::weil::SpMatrix;

fn err(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    as_object(v, path)?
        .get(key)
        .ok_or_else(|| err(path, format!("missing field `{key}`")))
}

pub fn rat_to_json(r: &Rat) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn parse_rat(v: &Value, path: &str) -> Result<Rat> {
    let s = as_str(v, path)?;
    let parse_int = |t: &str| -> Result<BigInt> {
        BigInt::from_str(t.trim()).map_err(|_| err(path, format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(err(path, "zero denominator"));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn parse_bigint(v: &Value, path: &str) -> Result<BigInt> {
    let s = as_str(v, path)?;
    BigInt::from_str(s.trim()).map_err(|_| err(path, format!("bad integer `{s}`")))
}

pub fn rat_vec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn parse_rat_vec(v: &Value, path: &str) -> Result<Vec<Rat>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_rat(x, &format!("{path}/{i}")))
        .collect()
}

pub fn qmat_to_json(m: &QMat) -> Value {
    Value::Array(m.rows.iter().map(|r| rat_vec_to_json(r)).collect())
}

pub fn parse_qmat(v: &Value, path: &str) -> Result<QMat> {
    let rows = as_array(v, path)?;
    if rows.is_empty() {
        return Err(err(path, "empty matrix"));
    }
    let parsed: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_rat_vec(r, &format!("{path}/{i}")))
        .collect::<Result<_>>()?;
    let width = parsed[0].len();
    if width == 0 || parsed.iter().any(|r| r.len() != width) {
        return Err(err(path, "ragged matrix rows"));
    }
    Ok(QMat::new(parsed))
}

pub fn lattice_to_json(l: &QLattice) -> Value {
    json!({
        "dim": l.dim(),
        "den": bigint_to_json(l.den()),
        "rows": l.int_rows().iter().map(|r| {
            Value::Array(r.iter().map(bigint_to_json).collect())
        }).collect::<Vec<_>>(),
    })
}

pub fn parse_lattice(v: &Value, path: &str) -> Result<QLattice> {
    let dim = field(v, "dim", path)?
        .as_u64()
        .ok_or_else(|| err(&format!("{path}/dim"), "expected a number"))? as usize;
    let den = parse_bigint(field(v, "den", path)?, &format!("{path}/den"))?;
    if den <= BigInt::from(0) {
        return Err(err(&format!("{path}/den"), "denominator must be positive"));
    }
    let rows_v = as_array(field(v, "rows", path)?, &format!("{path}/rows"))?;
    let den_rat = Rat::new(BigInt::one(), den);
    let mut rows = Vec::with_capacity(rows_v.len());
    for (i, row) in rows_v.iter().enumerate() {
        let row_path = format!("{path}/rows/{i}");
        let ints = as_array(row, &row_path)?;
        if ints.len() != dim {
            return Err(err(&row_path, format!("expected {dim} entries")));
        }
        let mut out = Vec::with_capacity(dim);
        for (j, x) in ints.iter().enumerate() {
            let n = parse_bigint(x, &format!("{row_path}/{j}"))?;
            out.push(Rat::from(n) * &den_rat);
        }
        rows.push(out);
    }
    if rows.len() != dim {
        return Err(err(&format!("{path}/rows"), format!("expected {dim} rows")));
    }
    QLattice::from_basis(rows)
        .map_err(|_| err(&format!("{path}/rows"), "rows are not linearly independent"))
}

pub fn cyclo_to_json(c: &CycloScalar) -> Value {
    json!({
        "order": c.order(),
        "coeffs": c.terms().map(|(k, v)| {
            Value::Array(vec![json!(k), rat_to_json(v)])
        }).collect::<Vec<_>>(),
    })
}

pub fn parse_cyclo(v: &Value, path: &str) -> Result<CycloScalar> {
    let order = field(v, "order", path)?
        .as_u64()
        .ok_or_else(|| err(&format!("{path}/order"), "expected a number"))?;
    if order == 0 {
        return Err(err(&format!("{path}/order"), "order must be positive"));
    }
    let coeffs = as_array(field(v, "coeffs", path)?, &format!("{path}/coeffs"))?;
    let mut acc = CycloScalar::zero();
    for (i, pair) in coeffs.iter().enumerate() {
        let pair_path = format!("{path}/coeffs/{i}");
        let parts = as_array(pair, &pair_path)?;
        if parts.len() != 2 {
            return Err(err(&pair_path, "expected [exponent, coefficient]"));
        }
        let k = parts[0]
            .as_u64()
            .ok_or_else(|| err(&format!("{pair_path}/0"), "expected a number"))?;
        let coeff = parse_rat(&parts[1], &format!("{pair_path}/1"))?;
        let term = CycloScalar::unit(&Rat::new(BigInt::from(k), BigInt::from(order))).scale(&coeff);
        acc = acc.add(&term);
    }
    Ok(acc)
}

pub fn normfactor_to_json(n: &NormFactor) -> Value {
    json!({ "q": rat_to_json(n.q()), "r": rat_to_json(n.r()) })
}

pub fn parse_normfactor(v: &Value, path: &str) -> Result<NormFactor> {
    let q = parse_rat(field(v, "q", path)?, &format!("{path}/q"))?;
    let r = parse_rat(field(v, "r", path)?, &format!("{path}/r"))?;
    if q <= Rat::from(BigInt::from(0)) || r <= Rat::from(BigInt::from(0)) {
        return Err(err(path, "norm factor parts must be positive"));
    }
    Ok(NormFactor::new(q, r))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    json!({ "norm": normfactor_to_json(&s.norm_part()), "cyclo": cyclo_to_json(s.cyclo()) })
}

pub fn melem_to_json(f: &MElement) -> Value {
    json!({
        "dim": f.dim(),
        "K": lattice_to_json(f.invariance()),
        "prefactor": normfactor_to_json(&f.prefactor()),
        "support": f.support().iter().map(|(rep, val)| {
            json!({ "rep": rat_vec_to_json(rep), "value": cyclo_to_json(val) })
        }).collect::<Vec<_>>(),
    })
}

pub fn parse_melem(v: &Value, path: &str) -> Result<MElement> {
    let dim = field(v, "dim", path)?
        .as_u64()
        .ok_or_else(|| err(&format!("{path}/dim"), "expected a number"))? as usize;
    let invariance = parse_lattice(field(v, "K", path)?, &format!("{path}/K"))?;
    if invariance.dim() != dim {
        return Err(err(&format!("{path}/K"), "lattice dimension disagrees with `dim`"));
    }
    let prefactor = parse_normfactor(field(v, "prefactor", path)?, &format!("{path}/prefactor"))?;
    let support = as_array(field(v, "support", path)?, &format!("{path}/support"))?;
    let mut terms = Vec::with_capacity(support.len());
    for (i, t) in support.iter().enumerate() {
        let t_path = format!("{path}/support/{i}");
        let rep = parse_rat_vec(field(t, "rep", &t_path)?, &format!("{t_path}/rep"))?;
        if rep.len() != dim {
            return Err(err(&format!("{t_path}/rep"), format!("expected {dim} entries")));
        }
        let value = parse_cyclo(field(t, "value", &t_path)?, &format!("{t_path}/value"))?;
        terms.push((rep, value));
    }
    Ok(MElement::assemble(invariance, &prefactor, terms))
}

pub fn heis_to_json(h: &HeisElement) -> Value {
    json!({
        "vplus": rat_vec_to_json(&h.vplus),
        "vminus": rat_vec_to_json(&h.vminus),
        "alpha": rat_to_json(&h.alpha),
    })
}

pub fn parse_heis(v: &Value, path: &str) -> Result<HeisElement> {
    let vplus = parse_rat_vec(field(v, "vplus", path)?, &format!("{path}/vplus"))?;
    let vminus = parse_rat_vec(field(v, "vminus", path)?, &format!("{path}/vminus"))?;
    if vplus.len() != vminus.len() {
        return Err(err(path, "vplus and vminus lengths differ"));
    }
    let alpha = parse_rat(field(v, "alpha", path)?, &format!("{path}/alpha"))?;
    Ok(HeisElement::new(vplus, vminus, alpha))
}

pub fn sp_to_json(g: &SpMatrix) -> Value {
    qmat_to_json(g.matrix())
}

pub fn parse_sp(v: &Value, path: &str) -> Result<SpMatrix> {
    let m = parse_qmat(v, path)?;
    SpMatrix::new(m).map_err(|e| err(path, format!("not symplectic: {e}")))
}

/// Compact deterministic rendering: serde_json orders object keys, so equal
/// values always produce identical bytes.  A trailing newline is appended.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::sample::Sampler;

    fn roundtrip_bytes(v: &Value, parse_write: impl Fn(&Value) -> Value) {
        let first = to_json_string(v);
        let second = to_json_string(&parse_write(v));
        assert_eq!(first, second);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_to_json(&rat(3, 6)), Value::String("1/2".into()));
        assert_eq!(rat_to_json(&rat_int(-4)), Value::String("-4".into()));
        assert_eq!(parse_rat(&json!("7/-2"), "").unwrap(), rat(-7, 2));
        assert!(parse_rat(&json!("1/0"), "").is_err());
        assert!(parse_rat(&json!(3), "").is_err());
    }

    #[test]
    fn error_paths_are_json_pointers() {
        let bad = json!({"dim": 1, "den": "2", "rows": [["x"]]});
        match parse_lattice(&bad, "") {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "/rows/0/0"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn lattice_melem_heis_roundtrip_byte_identically() {
        let mut s = Sampler::new(23);
        for _ in 0..10 {
            let l = s.lattice(2, 5);
            roundtrip_bytes(&lattice_to_json(&l), |v| {
                lattice_to_json(&parse_lattice(v, "").unwrap())
            });

            let f = s.melement(2, 4, 3);
            roundtrip_bytes(&melem_to_json(&f), |v| {
                melem_to_json(&parse_melem(v, "").unwrap())
            });
            assert!(parse_melem(&melem_to_json(&f), "").unwrap().equal_fn(&f));

            let h = s.heis(2, 3, 4);
            roundtrip_bytes(&heis_to_json(&h), |v| {
                heis_to_json(&parse_heis(v, "").unwrap())
            });

            let g = s.symplectic(1, 6);
            roundtrip_bytes(&sp_to_json(&g), |v| sp_to_json(&parse_sp(v, "").unwrap()));
        }
    }

    #[test]
    fn cyclo_roundtrip_canonicalizes() {
        let c = CycloScalar::unit(&rat(1, 3)).scale(&rat(2, 5)).add(&CycloScalar::one());
        let parsed = parse_cyclo(&cyclo_to_json(&c), "").unwrap();
        assert_eq!(parsed, c);
    }
}
