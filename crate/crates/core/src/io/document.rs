use num_complex::Complex;
use serde_json::{json, Map, Value};

use crate::complex::{ExtendedComplex, Mobius};
use crate::error::{Result, ZipError};
use crate::maps::{CircularSlitParams, GeodesicParams, InitialMap, Sector, SlitParams, TerminalMap};
use crate::newton::NewtonConfig;
use crate::pipeline::{MapPipeline, MapStep, Prevertex, Renorm, Variant};
use crate::scalar::Real;

const FORMAT: &str = "zipmap-pipeline";
const VERSION: u64 = 1;

fn num<T: Real>(x: T) -> Result<Value> {
    let x = x.as_f64();
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| ZipError::Format(format!("cannot store non-finite value {x}")))
}

fn complex<T: Real>(z: Complex<T>) -> Result<Value> {
    Ok(Value::Array(vec![num(z.re)?, num(z.im)?]))
}

fn ext<T: Real>(z: ExtendedComplex<T>) -> Result<Value> {
    match z {
        ExtendedComplex::Infinity => Ok(Value::String("inf".into())),
        ExtendedComplex::Finite(z) => complex(z),
    }
}

fn opt<T: Real>(x: Option<T>) -> Result<Value> {
    x.map_or(Ok(Value::Null), num)
}

fn step_json<T: Real>(step: &MapStep<T>) -> Result<Value> {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::String(step.kind().into()));
    let mut put = |k: &str, v: Value| {
        obj.insert(k.into(), v);
    };
    match step {
        MapStep::Initial(InitialMap::Geodesic { z0, z1 }) => {
            put("z0", complex(*z0)?);
            put("z1", complex(*z1)?);
        }
        MapStep::Initial(InitialMap::Zipper { z0, z1, z2 }) => {
            put("z0", complex(*z0)?);
            put("z1", complex(*z1)?);
            put("z2", complex(*z2)?);
        }
        MapStep::Initial(InitialMap::Unbounded { z1, z2 }) => {
            put("z1", complex(*z1)?);
            put("z2", complex(*z2)?);
        }
        MapStep::GeodesicSlit { map, renorm } => {
            put("a", complex(map.a)?);
            put("pole", opt(renorm.pole)?);
            put("scale", num(renorm.scale)?);
        }
        MapStep::StraightSlit(s) => put("a", complex(s.a)?),
        MapStep::CircularSlit { map, renorm } => {
            put("a", complex(map.a)?);
            put("c", complex(map.c)?);
            put("pole", opt(renorm.pole)?);
            put("scale", num(renorm.scale)?);
        }
        MapStep::Terminal(t) => {
            put("zeta", opt(t.zeta)?);
            put("theta", num(t.theta)?);
            let sector = match t.sector {
                Sector::First => "first",
                Sector::Second => "second",
            };
            put("sector", Value::String(sector.into()));
        }
        MapStep::MobiusNormalize(m) => {
            put("a", complex(m.a)?);
            put("b", complex(m.b)?);
            put("c", complex(m.c)?);
            put("d", complex(m.d)?);
        }
        MapStep::WeldSlit { x, y } => {
            put("x", num(*x)?);
            put("y", num(*y)?);
        }
        MapStep::SqrtUpper => {}
    }
    Ok(Value::Object(obj))
}

/// Serialize a pipeline. Numbers are written in the shortest form that
/// parses back to the same bits, so loading reproduces the pipeline exactly.
pub fn pipeline_to_json<T: Real>(p: &MapPipeline<T>) -> Result<String> {
    let doc = json!({
        "format": FORMAT,
        "version": VERSION,
        "variant": p.variant.name(),
        "orientation": p.orientation,
        "bounded": p.bounded,
        "newton": {
            "tol": num(p.newton.tol)?,
            "max_iter": p.newton.max_iter,
            "far_threshold": num(p.newton.far_threshold)?,
            "tip_fraction": num(p.newton.tip_fraction)?,
        },
        "points": p.data_points.iter().map(|&z| ext(z)).collect::<Result<Vec<_>>>()?,
        "prevertices": p
            .prevertices
            .iter()
            .map(|pv| Ok(json!({ "interior": ext(pv.interior)?, "exterior": ext(pv.exterior)? })))
            .collect::<Result<Vec<_>>>()?,
        "steps": p.steps.iter().map(step_json).collect::<Result<Vec<_>>>()?,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| ZipError::Format(e.to_string()))
}

fn field<'a>(obj: &'a Value, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| ZipError::Format(format!("{ctx}: missing field `{key}`")))
}

fn read_num<T: Real>(v: &Value, ctx: &str) -> Result<T> {
    v.as_f64()
        .map(T::lit)
        .ok_or_else(|| ZipError::Format(format!("{ctx}: expected a number")))
}

fn read_complex<T: Real>(v: &Value, ctx: &str) -> Result<Complex<T>> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex::new(read_num(re, ctx)?, read_num(im, ctx)?)),
        _ => Err(ZipError::Format(format!("{ctx}: expected [re, im]"))),
    }
}

fn read_ext<T: Real>(v: &Value, ctx: &str) -> Result<ExtendedComplex<T>> {
    match v.as_str() {
        Some("inf") => Ok(ExtendedComplex::Infinity),
        Some(other) => Err(ZipError::Format(format!("{ctx}: unexpected string {other:?}"))),
        None => read_complex(v, ctx).map(Into::into),
    }
}

fn read_opt<T: Real>(v: &Value, ctx: &str) -> Result<Option<T>> {
    if v.is_null() {
        Ok(None)
    } else {
        read_num(v, ctx).map(Some)
    }
}

fn read_step<T: Real>(v: &Value, k: usize) -> Result<MapStep<T>> {
    let ctx = format!("step {k}");
    let kind = field(v, "kind", &ctx)?
        .as_str()
        .ok_or_else(|| ZipError::Format(format!("{ctx}: `kind` must be a string")))?;
    let c = |key: &str| read_complex::<T>(field(v, key, &ctx)?, &format!("{ctx}.{key}"));
    let n = |key: &str| read_num::<T>(field(v, key, &ctx)?, &format!("{ctx}.{key}"));
    let renorm = || -> Result<Renorm<T>> {
        Ok(Renorm { pole: read_opt(field(v, "pole", &ctx)?, &ctx)?, scale: n("scale")? })
    };
    let wrap = |e: ZipError| ZipError::Format(format!("{ctx}: {e}"));
    let step = match kind {
        "initial_geodesic" => MapStep::Initial(InitialMap::geodesic(c("z0")?, c("z1")?).map_err(wrap)?),
        "initial_zipper" => MapStep::Initial(InitialMap::zipper(c("z0")?, c("z1")?, c("z2")?).map_err(wrap)?),
        "initial_unbounded" => MapStep::Initial(InitialMap::unbounded(c("z1")?, c("z2")?).map_err(wrap)?),
        "geodesic_slit" => MapStep::GeodesicSlit { map: GeodesicParams::new(c("a")?).map_err(wrap)?, renorm: renorm()? },
        "straight_slit" => MapStep::StraightSlit(SlitParams::new(c("a")?).map_err(wrap)?),
        "circular_slit" => MapStep::CircularSlit {
            map: CircularSlitParams::new(c("a")?, c("c")?).map_err(wrap)?,
            renorm: renorm()?,
        },
        "terminal_geodesic" | "terminal_zipper" => {
            let sector = match field(v, "sector", &ctx)?.as_str() {
                Some("first") => Sector::First,
                Some("second") => Sector::Second,
                _ => return Err(ZipError::Format(format!("{ctx}: sector must be \"first\" or \"second\""))),
            };
            let zeta = read_opt(field(v, "zeta", &ctx)?, &ctx)?;
            MapStep::Terminal(TerminalMap::new(zeta, n("theta")?, sector).map_err(wrap)?)
        }
        "mobius_normalize" => MapStep::MobiusNormalize(Mobius::new(c("a")?, c("b")?, c("c")?, c("d")?).map_err(wrap)?),
        "weld_slit" => MapStep::WeldSlit { x: n("x")?, y: n("y")? },
        "sqrt_upper" => MapStep::SqrtUpper,
        other => return Err(ZipError::Format(format!("{ctx}: unknown kind {other:?}"))),
    };
    Ok(step)
}

/// Load a pipeline written by [`pipeline_to_json`].
pub fn pipeline_from_json<T: Real>(text: &str) -> Result<MapPipeline<T>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ZipError::Format(e.to_string()))?;
    if doc.get("format").and_then(Value::as_str) != Some(FORMAT) {
        return Err(ZipError::Format(format!("not a {FORMAT} document")));
    }
    let variant = field(&doc, "variant", "document")?
        .as_str()
        .and_then(Variant::from_name)
        .ok_or_else(|| ZipError::Format("unknown variant".into()))?;
    let orientation = match field(&doc, "orientation", "document")?.as_i64() {
        Some(1) => 1,
        Some(-1) => -1,
        _ => return Err(ZipError::Format("orientation must be 1 or -1".into())),
    };
    let bounded = field(&doc, "bounded", "document")?
        .as_bool()
        .ok_or_else(|| ZipError::Format("`bounded` must be a boolean".into()))?;
    let nw = field(&doc, "newton", "document")?;
    let newton = NewtonConfig {
        tol: read_num(field(nw, "tol", "newton")?, "newton.tol")?,
        max_iter: field(nw, "max_iter", "newton")?
            .as_u64()
            .ok_or_else(|| ZipError::Format("newton.max_iter must be an integer".into()))? as usize,
        far_threshold: read_num(field(nw, "far_threshold", "newton")?, "newton.far_threshold")?,
        tip_fraction: read_num(field(nw, "tip_fraction", "newton")?, "newton.tip_fraction")?,
    };
    newton.validate().map_err(|e| ZipError::Format(e.to_string()))?;
    let list = |key: &str| -> Result<&Vec<Value>> {
        field(&doc, key, "document")?
            .as_array()
            .ok_or_else(|| ZipError::Format(format!("`{key}` must be an array")))
    };
    let data_points = list("points")?
        .iter()
        .enumerate()
        .map(|(i, v)| read_ext(v, &format!("points[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let prevertices = list("prevertices")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let ctx = format!("prevertices[{i}]");
            Ok(Prevertex {
                interior: read_ext(field(v, "interior", &ctx)?, &ctx)?,
                exterior: read_ext(field(v, "exterior", &ctx)?, &ctx)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if prevertices.len() != data_points.len() {
        return Err(ZipError::Format("points and prevertices differ in length".into()));
    }
    let steps = list("steps")?
        .iter()
        .enumerate()
        .map(|(k, v)| read_step(v, k))
        .collect::<Result<Vec<_>>>()?;
    if steps.is_empty() {
        return Err(ZipError::Format("a pipeline needs at least one step".into()));
    }
    Ok(MapPipeline { variant, steps, data_points, prevertices, orientation, bounded, newton })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{BranchPolicy, WeldingSpec};

    fn pts(raw: &[(f64, f64)]) -> Vec<ExtendedComplex<f64>> {
        raw.iter().map(|&(x, y)| Complex::new(x, y).into()).collect()
    }

    fn square() -> Vec<ExtendedComplex<f64>> {
        pts(&[(0.0, 0.0), (1.0, 0.1), (1.1, 1.0), (0.0, 0.9), (-0.3, 0.5), (-0.2, 0.2)])
    }

    fn round_trip(p: &MapPipeline<f64>) {
        let text = pipeline_to_json(p).unwrap();
        let back: MapPipeline<f64> = pipeline_from_json(&text).unwrap();
        assert_eq!(&back, p);
        assert_eq!(pipeline_to_json(&back).unwrap(), text);
    }

    #[test]
    fn every_variant_round_trips() {
        round_trip(&MapPipeline::build_geodesic(&square()).unwrap());
        round_trip(&MapPipeline::build_slit(&square()).unwrap());
        round_trip(&MapPipeline::build_zipper(&square()).unwrap());
        let normalized = MapPipeline::build_geodesic(&square())
            .unwrap()
            .normalize_to_disc(Complex::new(0.4, 0.5), Complex::new(0.0, 0.0))
            .unwrap();
        round_trip(&normalized);
        let mut arc = vec![ExtendedComplex::Infinity];
        arc.extend(pts(&[(0.0, 0.0), (1.0, 0.2), (2.0, 0.1)]));
        round_trip(&MapPipeline::build_geodesic(&arc).unwrap());
        let spec = WeldingSpec::new(vec![1.0, 2.0], vec![-1.5, -2.5]).unwrap();
        round_trip(&MapPipeline::weld_build(&spec).unwrap());
    }

    #[test]
    fn loaded_pipeline_evaluates_identically() {
        let p = MapPipeline::build_zipper(&square()).unwrap();
        let q: MapPipeline<f64> = pipeline_from_json(&pipeline_to_json(&p).unwrap()).unwrap();
        let z: ExtendedComplex<f64> = Complex::new(0.4, 0.5).into();
        assert_eq!(
            p.eval_forward(z, BranchPolicy::Interior).unwrap(),
            q.eval_forward(z, BranchPolicy::Interior).unwrap()
        );
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(pipeline_from_json::<f64>("{}").is_err());
        assert!(pipeline_from_json::<f64>("not json").is_err());
        let p = MapPipeline::build_geodesic(&square()).unwrap();
        let text = pipeline_to_json(&p).unwrap().replace("geodesic_slit", "mystery");
        let err = pipeline_from_json::<f64>(&text).unwrap_err();
        assert!(err.to_string().contains("mystery"));
    }
}
