use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CurveProfile, Iso2, Iso3, Polygon, Shape, ShapeKind, SmoothCurve, SolidProfile};
use crate::error::{Error, Result};
use crate::kernels::spec::{param_f64, param_f64_or};

/// JSON form of a shape: `{"type": ..., "params": {...}}`.
///
/// Types: `polygon` (`vertices`), `ball` (`radius`, `center`), `ellipse`
/// (`a`, `b` or `axes`, `center`, `angle`), `fourier_curve` (`c0`, `a`, `b`),
/// `limacon` (`a`, `b`), `perturbed_sphere` (`radius`, `coeffs`, `dim`),
/// `stadium` (`half_length`, `radius`, `cap_vertices`). Smooth planar curves
/// accept `samples` and `angle` (rotation about the center).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

fn f64_list(params: &Value, key: &str) -> Result<Option<Vec<f64>>> {
    match params.get(key) {
        None => Ok(None),
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Spec(format!("`{key}` must be an array of numbers")))?;
            arr.iter()
                .map(|x| x.as_f64().ok_or_else(|| Error::Spec(format!("`{key}` must contain numbers"))))
                .collect::<Result<Vec<_>>>()
                .map(Some)
        }
    }
}

fn center(params: &Value, dim: usize) -> Result<Vec<f64>> {
    match f64_list(params, "center")? {
        None => Ok(vec![0.0; dim]),
        Some(c) if c.len() == dim => Ok(c),
        Some(c) => Err(Error::Spec(format!("`center` must have {dim} coordinates, got {}", c.len()))),
    }
}

fn planar_frame(params: &Value) -> Result<Iso2> {
    let c = center(params, 2)?;
    let angle = param_f64_or(params, "angle", 0.0)?;
    Ok(Iso2::rotation(angle).then(&Iso2::translation(Vector2::new(c[0], c[1]))))
}

fn planar_curve(params: &Value, profile: CurveProfile) -> Result<Shape> {
    let samples = param_f64_or(params, "samples", super::DEFAULT_CURVE_SAMPLES as f64)?;
    if samples.fract() != 0.0 || samples < 16.0 {
        return Err(Error::Spec("`samples` must be an integer >= 16".into()));
    }
    let curve = SmoothCurve::with_samples(profile, planar_frame(params)?, samples as usize)?;
    Ok(ShapeKind::Curve(curve).into())
}

impl ShapeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<Shape> {
        let p = &self.params;
        match self.kind.as_str() {
            "polygon" => {
                let raw = p
                    .get("vertices")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Spec("polygon needs `vertices`: [[x, y], ...]".into()))?;
                let mut v = Vec::with_capacity(raw.len());
                for q in raw {
                    let q = q
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| Error::Spec("polygon vertices must be [x, y] pairs".into()))?;
                    let x = q[0].as_f64().ok_or_else(|| Error::Spec("vertex coordinate must be a number".into()))?;
                    let y = q[1].as_f64().ok_or_else(|| Error::Spec("vertex coordinate must be a number".into()))?;
                    v.push([x, y]);
                }
                Ok(ShapeKind::Polygon(Polygon::new(v)?).into())
            }
            "ball" => {
                let dim = match p.get("center") {
                    Some(_) => f64_list(p, "center")?.map_or(2, |c| c.len()),
                    None => param_f64_or(p, "dim", 2.0)? as usize,
                };
                let c = center(p, dim)?;
                Shape::ball(&c, param_f64(p, "radius")?)
            }
            "ellipse" => match f64_list(p, "axes")? {
                Some(axes) if axes.len() == 3 => {
                    let c = center(p, 3)?;
                    Shape::solid(
                        SolidProfile::Ellipsoid {
                            axes: [axes[0], axes[1], axes[2]],
                        },
                        Iso3::translation(Vector3::new(c[0], c[1], c[2])),
                    )
                }
                Some(axes) if axes.len() == 2 => planar_curve(p, CurveProfile::Ellipse { a: axes[0], b: axes[1] }),
                Some(_) => Err(Error::Spec("`axes` must have 2 or 3 entries".into())),
                None => planar_curve(
                    p,
                    CurveProfile::Ellipse {
                        a: param_f64(p, "a")?,
                        b: param_f64(p, "b")?,
                    },
                ),
            },
            "fourier_curve" => planar_curve(
                p,
                CurveProfile::Polar {
                    c0: param_f64(p, "c0")?,
                    cos: f64_list(p, "a")?.unwrap_or_default(),
                    sin: f64_list(p, "b")?.unwrap_or_default(),
                },
            ),
            "limacon" => planar_curve(
                p,
                CurveProfile::Polar {
                    c0: param_f64(p, "a")?,
                    cos: vec![param_f64(p, "b")?],
                    sin: vec![],
                },
            ),
            "perturbed_sphere" => {
                let radius = param_f64(p, "radius")?;
                let coeffs = f64_list(p, "coeffs")?.unwrap_or_default();
                match param_f64_or(p, "dim", 3.0)? as usize {
                    2 => planar_curve(
                        p,
                        CurveProfile::Polar {
                            c0: radius,
                            cos: coeffs.iter().map(|c| radius * c).collect(),
                            sin: vec![],
                        },
                    ),
                    3 => {
                        let c = center(p, 3)?;
                        Shape::solid(
                            SolidProfile::PerturbedSphere { radius, coeffs },
                            Iso3::translation(Vector3::new(c[0], c[1], c[2])),
                        )
                    }
                    d => Err(Error::Spec(format!("dimension must be 2 or 3, got {d}"))),
                }
            }
            "stadium" => {
                let n = param_f64_or(p, "cap_vertices", 256.0)?;
                if n.fract() != 0.0 || n < 2.0 {
                    return Err(Error::Spec("`cap_vertices` must be an integer >= 2".into()));
                }
                Shape::stadium(param_f64(p, "half_length")?, param_f64(p, "radius")?, n as usize)
            }
            other => Err(Error::Spec(format!("unknown shape type `{other}`"))),
        }
    }
}

impl Shape {
    pub fn from_json(text: &str) -> Result<Self> {
        ShapeSpec::from_json(text)?.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn builds_each_type() {
        let cases = [
            (r#"{"type":"polygon","params":{"vertices":[[0,0],[1,0],[0,1]]}}"#, 0.5, 2),
            (r#"{"type":"ball","params":{"radius":1}}"#, PI, 2),
            (r#"{"type":"ball","params":{"center":[0,0,0],"radius":1}}"#, 4.0 * PI / 3.0, 3),
            (r#"{"type":"ellipse","params":{"a":0.2,"b":0.1}}"#, 0.02 * PI, 2),
            (r#"{"type":"ellipse","params":{"axes":[1,2,3]}}"#, 8.0 * PI, 3),
            (r#"{"type":"fourier_curve","params":{"c0":1,"a":[0.1],"b":[0.2]}}"#, PI * 1.025, 2),
            (r#"{"type":"limacon","params":{"a":1,"b":0.3}}"#, PI * 1.045, 2),
            (r#"{"type":"perturbed_sphere","params":{"radius":1,"coeffs":[]}}"#, 4.0 * PI / 3.0, 3),
        ];
        for (text, vol, dim) in cases {
            let s = Shape::from_json(text).unwrap();
            assert_eq!(s.dim(), dim, "{text}");
            assert!((s.volume() - vol).abs() < 1e-12, "{text}: {}", s.volume());
        }
    }

    #[test]
    fn rotated_ellipse_spec() {
        let s = Shape::from_json(r#"{"type":"ellipse","params":{"a":2,"b":1,"angle":1.5707963267948966}}"#).unwrap();
        assert!(s.contains(&[0.0, 1.5]));
        assert!(!s.contains(&[1.5, 0.0]));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Shape::from_json(r#"{"type":"torus","params":{}}"#).is_err());
        assert!(Shape::from_json(r#"{"type":"ball","params":{"radius":-1}}"#).is_err());
        assert!(Shape::from_json(r#"{"type":"limacon","params":{"a":1,"b":2}}"#).is_err());
        assert!(Shape::from_json(r#"{"type":"polygon","params":{"vertices":[[0,0],[1,1]]}}"#).is_err());
    }
}
