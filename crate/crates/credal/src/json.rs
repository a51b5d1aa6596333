//! JSON encodings for every wire type.
//!
//! Numbers serialize as JSON numbers in float mode and as strings ("3",
//! "1/4") in rational mode; parsing accepts JSON numbers, integer strings,
//! and "p/q" strings in either mode.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::independence::{JointDistribution, ProductOrder};
use crate::maximality::MaximalityCertificate;
use crate::measure::{CredalSet, FiniteSupport, ProbabilityMeasure, ValueTable};
use crate::scalar::{Mode, Scalar};
use crate::space::{Distribution, SublinearSpace};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub fn num_to_json<T: Scalar>(x: &T) -> Value {
    match T::MODE {
        Mode::Rational => Value::String(format!("{x}")),
        Mode::Float => json!(x.to_f64()),
    }
}

pub fn num_from_json<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => {
            let f = n.as_f64().ok_or_else(|| bad("non-finite number"))?;
            Ok(T::from_f64(f))
        }
        Value::String(s) => match T::MODE {
            Mode::Rational => {
                let r = BigRational::from_str(s)
                    .map_err(|e| bad(format!("cannot parse rational {s:?}: {e}")))?;
                // route through f64-free construction: T is Rat here, but keep
                // the generic signature via numerator/denominator strings
                rat_to_scalar::<T>(&r)
            }
            Mode::Float => {
                let r = BigRational::from_str(s)
                    .map_err(|e| bad(format!("cannot parse rational {s:?}: {e}")))?;
                Ok(T::from_f64(rat_f64(&r)))
            }
        },
        _ => Err(bad("expected a number or a \"p/q\" string")),
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn rat_to_scalar<T: Scalar>(r: &BigRational) -> Result<T> {
    use num_traits::ToPrimitive;
    let numer = r.numer();
    let denom = r.denom();
    match (numer.to_i64(), denom.to_i64()) {
        (Some(n), Some(d)) => Ok(T::ratio(n, d)),
        _ => Ok(T::from_f64(rat_f64(r))),
    }
}

pub fn support_to_json<T: Scalar>(s: &FiniteSupport<T>) -> Value {
    Value::Array(
        s.points()
            .iter()
            .map(|p| Value::Array(p.iter().map(num_to_json).collect()))
            .collect(),
    )
}

pub fn support_from_json<T: Scalar>(v: &Value) -> Result<FiniteSupport<T>> {
    let rows = v.as_array().ok_or_else(|| bad("support must be an array of arrays"))?;
    let points = rows
        .iter()
        .map(|row| {
            let coords = row.as_array().ok_or_else(|| bad("support point must be an array"))?;
            coords.iter().map(num_from_json).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSupport::new(points)
}

pub fn measure_to_json<T: Scalar>(m: &ProbabilityMeasure<T>) -> Value {
    json!({ "weights": m.weights().iter().map(num_to_json).collect::<Vec<_>>() })
}

pub fn measure_from_json<T: Scalar>(
    support: &FiniteSupport<T>,
    v: &Value,
) -> Result<ProbabilityMeasure<T>> {
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("measure must have a \"weights\" array"))?
        .iter()
        .map(num_from_json)
        .collect::<Result<Vec<T>>>()?;
    ProbabilityMeasure::new(support.clone(), weights)
}

pub fn credal_to_json<T: Scalar>(m: &CredalSet<T>) -> Value {
    json!({
        "support": support_to_json(m.support()),
        "generators": m.generators().iter().map(measure_to_json).collect::<Vec<_>>(),
    })
}

pub fn credal_from_json<T: Scalar>(v: &Value) -> Result<CredalSet<T>> {
    let support = support_from_json(
        v.get("support").ok_or_else(|| bad("credal set must have \"support\""))?,
    )?;
    let generators = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("credal set must have a \"generators\" array"))?
        .iter()
        .map(|g| measure_from_json(&support, g))
        .collect::<Result<Vec<_>>>()?;
    CredalSet::new(generators)
}

pub fn table_to_json<T: Scalar>(t: &ValueTable<T>) -> Value {
    json!({ "values": t.values().iter().map(num_to_json).collect::<Vec<_>>() })
}

pub fn table_from_json<T: Scalar>(
    support: &FiniteSupport<T>,
    v: &Value,
) -> Result<ValueTable<T>> {
    let values = v
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("table must have a \"values\" array"))?
        .iter()
        .map(num_from_json)
        .collect::<Result<Vec<T>>>()?;
    ValueTable::new(support.clone(), values)
}

pub fn space_to_json<T: Scalar>(s: &SublinearSpace<T>) -> Value {
    json!({
        "omega": support_to_json(s.omega()),
        "credal": credal_to_json(s.credal()),
    })
}

pub fn space_from_json<T: Scalar>(v: &Value) -> Result<SublinearSpace<T>> {
    let credal = credal_from_json(
        v.get("credal").ok_or_else(|| bad("space must have \"credal\""))?,
    )?;
    if let Some(omega) = v.get("omega") {
        let omega: FiniteSupport<T> = support_from_json(omega)?;
        if &omega != credal.support() {
            return Err(bad("\"omega\" does not match the credal support"));
        }
    }
    Ok(SublinearSpace::new(credal))
}

/// A distribution serializes as a space on its grid.
pub fn distribution_to_json<T: Scalar>(d: &Distribution<T>) -> Value {
    json!({
        "omega": support_to_json(d.grid()),
        "credal": credal_to_json(d.credal()),
    })
}

pub fn distribution_from_json<T: Scalar>(v: &Value) -> Result<Distribution<T>> {
    Ok(Distribution::new(space_from_json::<T>(v)?.credal().clone()))
}

pub fn joint_to_json<T: Scalar>(j: &JointDistribution<T>) -> Value {
    json!({
        "gridX": support_to_json(j.grid_x()),
        "gridY": support_to_json(j.grid_y()),
        "credal": credal_to_json(j.credal()),
    })
}

pub fn joint_from_json<T: Scalar>(v: &Value) -> Result<JointDistribution<T>> {
    let grid_x = support_from_json(
        v.get("gridX").ok_or_else(|| bad("joint must have \"gridX\""))?,
    )?;
    let grid_y = support_from_json(
        v.get("gridY").ok_or_else(|| bad("joint must have \"gridY\""))?,
    )?;
    let credal = credal_from_json(
        v.get("credal").ok_or_else(|| bad("joint must have \"credal\""))?,
    )?;
    JointDistribution::new(grid_x, grid_y, credal)
}

pub fn order_to_str(order: ProductOrder) -> &'static str {
    match order {
        ProductOrder::YFromX => "y-from-x",
        ProductOrder::XFromY => "x-from-y",
    }
}

pub fn order_from_str(s: &str) -> Result<ProductOrder> {
    match s {
        "y-from-x" => Ok(ProductOrder::YFromX),
        "x-from-y" => Ok(ProductOrder::XFromY),
        _ => Err(bad(format!("unknown order {s:?}; expected y-from-x or x-from-y"))),
    }
}

pub fn maximality_to_json<T: Scalar>(c: &MaximalityCertificate<T>) -> Value {
    let mut map = Map::new();
    map.insert("maximal".into(), json!(c.maximal));
    map.insert("mode".into(), json!(format!("{}", c.mode)));
    if let Some(gamma) = &c.gamma {
        map.insert(
            "gamma".into(),
            Value::Array(
                gamma
                    .iter()
                    .map(|p| Value::Array(p.iter().map(num_to_json).collect()))
                    .collect(),
            ),
        );
    }
    if let Some(violator) = &c.violator {
        map.insert("violator".into(), measure_to_json(violator));
    }
    Value::Object(map)
}

pub fn instance_pair_to_json<T: Scalar>(
    d_x: &Distribution<T>,
    d_y: &Distribution<T>,
) -> Value {
    json!({
        "x": distribution_to_json(d_x),
        "y": distribution_to_json(d_y),
    })
}

pub fn instance_pair_from_json<T: Scalar>(
    v: &Value,
) -> Result<(Distribution<T>, Distribution<T>)> {
    let x = distribution_from_json(v.get("x").ok_or_else(|| bad("pair must have \"x\""))?)?;
    let y = distribution_from_json(v.get("y").ok_or_else(|| bad("pair must have \"y\""))?)?;
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn r(n: i64, d: i64) -> Rat {
        Rat::ratio(n, d)
    }

    fn p1p2() -> Distribution<Rat> {
        let grid = FiniteSupport::scalar(vec![
            Rat::from_int(-1),
            Rat::from_int(0),
            Rat::from_int(1),
        ])
        .unwrap();
        let p1 =
            ProbabilityMeasure::new(grid.clone(), vec![r(1, 4), r(1, 2), r(1, 4)]).unwrap();
        let p2 = ProbabilityMeasure::new(grid, vec![r(2, 5), r(1, 5), r(2, 5)]).unwrap();
        Distribution::new(CredalSet::new(vec![p1, p2]).unwrap())
    }

    #[test]
    fn distribution_round_trip_rational() {
        let d = p1p2();
        let v = distribution_to_json(&d);
        let back: Distribution<Rat> = distribution_from_json(&v).unwrap();
        assert_eq!(back.credal(), d.credal());
    }

    #[test]
    fn rational_strings_accepted() {
        let v: Value = serde_json::from_str(
            r#"{"support":[["-1"],[0],["1/1"]],"generators":[{"weights":["1/4","1/2","1/4"]}]}"#,
        )
        .unwrap();
        let c: CredalSet<Rat> = credal_from_json(&v).unwrap();
        assert_eq!(c.generators()[0].weights()[1], r(1, 2));
    }

    #[test]
    fn float_numbers_accepted() {
        let v: Value = serde_json::from_str(
            r#"{"support":[[-1],[0],[1]],"generators":[{"weights":[0.25,0.5,0.25]}]}"#,
        )
        .unwrap();
        let c: CredalSet<f64> = credal_from_json(&v).unwrap();
        assert_eq!(c.generators()[0].weights()[1], 0.5);
    }

    #[test]
    fn joint_round_trip() {
        use crate::independence::{peng_product, ProductOrder};
        let d = p1p2();
        let j = peng_product(&d, &d, ProductOrder::YFromX).unwrap();
        let v = joint_to_json(&j);
        let back: JointDistribution<Rat> = joint_from_json(&v).unwrap();
        assert_eq!(back.credal(), j.credal());
    }

    #[test]
    fn bad_input_rejected() {
        let v: Value = serde_json::from_str(r#"{"generators":[]}"#).unwrap();
        assert!(credal_from_json::<Rat>(&v).is_err());
    }
}
