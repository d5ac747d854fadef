//! JSON interchange forms for scalars, vectors, operators, spectra, states,
//! projections and measures.
//!
//! Scalars carry `{"algebra": "H"|"O", "coeffs": [...]}` with the
//! coefficients in generator order. Operators accept either a raw real
//! representation (coordinate-major, generator-minor layout) or a matrix of
//! hypercomplex entries acting by left multiplication.

use crate::algebra::{Algebra, Hypercomplex};
use crate::error::{Error, Result};
use crate::kmodule::KVector;
use crate::operator::QuasilinearOp;
use crate::projections::GradedProjection;
use crate::spectral::{SpectrumEstimate, SpectrumMethod};
use crate::states::{KMeasure, StateFunctional, WeightFunctional};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypercomplexJson {
    pub algebra: Algebra,
    pub coeffs: Vec<f64>,
}

impl HypercomplexJson {
    pub fn from(z: &Hypercomplex) -> Self {
        HypercomplexJson {
            algebra: z.algebra(),
            coeffs: z.coeffs().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Hypercomplex> {
        Hypercomplex::new(self.algebra, &self.coeffs)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KVectorJson {
    pub algebra: Algebra,
    pub coords: Vec<Vec<f64>>,
}

impl KVectorJson {
    pub fn from(x: &KVector) -> Self {
        KVectorJson {
            algebra: x.algebra(),
            coords: x.coords().iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }

    pub fn build(&self) -> Result<KVector> {
        let coords = self
            .coords
            .iter()
            .map(|c| Hypercomplex::new(self.algebra, c))
            .collect::<Result<Vec<_>>>()?;
        KVector::new(coords)
    }
}

/// Operator form: either the raw real representation or hypercomplex
/// entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub algebra: Algebra,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Vec<f64>>>>,
}

impl OperatorJson {
    pub fn from_rep(t: &QuasilinearOp) -> Self {
        let big = t.real_dim();
        let rep = (0..big)
            .map(|r| (0..big).map(|c| t.rep()[(r, c)]).collect())
            .collect();
        OperatorJson {
            algebra: t.algebra(),
            n: t.module_dim(),
            rep: Some(rep),
            entries: None,
        }
    }

    pub fn build(&self) -> Result<QuasilinearOp> {
        match (&self.rep, &self.entries) {
            (Some(rows), _) => {
                let big = self.n * self.algebra.dim();
                if rows.len() != big || rows.iter().any(|r| r.len() != big) {
                    return Err(Error::DimensionMismatch {
                        expected: big,
                        got: rows.len(),
                    });
                }
                let mut rep = DMatrix::zeros(big, big);
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        rep[(r, c)] = *v;
                    }
                }
                QuasilinearOp::from_rep(self.algebra, self.n, rep)
            }
            (None, Some(entries)) => {
                if entries.len() != self.n {
                    return Err(Error::DimensionMismatch {
                        expected: self.n,
                        got: entries.len(),
                    });
                }
                let parsed = entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| Hypercomplex::new(self.algebra, e))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                QuasilinearOp::from_k_matrix(self.algebra, &parsed)
            }
            (None, None) => Err(Error::InvalidParameter(
                "operator needs either rep or entries".into(),
            )),
        }
    }

    /// Diagonal of the entries form, when present.
    pub fn diagonal(&self) -> Result<Vec<Hypercomplex>> {
        let entries = self.entries.as_ref().ok_or(Error::InvalidParameter(
            "diagonal mode needs the entries form".into(),
        ))?;
        let mut out = Vec::with_capacity(entries.len());
        for (l, row) in entries.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                let z = Hypercomplex::new(self.algebra, e)?;
                if l == k {
                    out.push(z);
                } else if z.norm() > 0.0 {
                    return Err(Error::InvalidParameter(
                        "diagonal mode needs a diagonal entries matrix".into(),
                    ));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReportJson {
    pub method: SpectrumMethod,
    pub tolerance: f64,
    pub points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<Vec<f64>>,
}

impl SpectrumReportJson {
    pub fn from(sp: &SpectrumEstimate) -> Self {
        SpectrumReportJson {
            method: sp.method,
            tolerance: sp.tolerance,
            points: sp.points.iter().map(|p| p.coeffs().to_vec()).collect(),
            slice: sp.slice.map(|m| m.coeffs().to_vec()),
        }
    }
}

/// State form: a unit vector, a signed density, or point weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateJson {
    Vector {
        x: KVectorJson,
    },
    Density {
        vectors: Vec<KVectorJson>,
        signs: Vec<f64>,
    },
    Weights {
        #[serde(rename = "V")]
        points: Vec<String>,
        w: Vec<Vec<f64>>,
    },
}

impl StateJson {
    pub fn build_operator_state(&self) -> Result<StateFunctional> {
        match self {
            StateJson::Vector { x } => StateFunctional::vector_state(&x.build()?),
            StateJson::Density { vectors, signs } => {
                let vs = vectors
                    .iter()
                    .map(|v| v.build())
                    .collect::<Result<Vec<_>>>()?;
                StateFunctional::density(&vs, signs)
            }
            StateJson::Weights { .. } => Err(Error::InvalidParameter(
                "weight-form states act on point tables, not operators".into(),
            )),
        }
    }

    pub fn build_weight_form(&self) -> Result<WeightFunctional> {
        match self {
            StateJson::Weights { points, w } => {
                let weights = w
                    .iter()
                    .map(|row| {
                        row.first().copied().ok_or(Error::EmptyInput("weight row"))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                WeightFunctional::new(points.clone(), weights)
            }
            _ => Err(Error::InvalidParameter("not a weight-form state".into())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub operator: OperatorJson,
    pub basis: Vec<KVectorJson>,
}

impl ProjectionJson {
    pub fn from(p: &GradedProjection) -> Self {
        ProjectionJson {
            operator: OperatorJson::from_rep(p.op()),
            basis: p.basis().iter().map(KVectorJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub algebra: Algebra,
    pub points: Vec<String>,
    /// per point: an `(m+1) x (m+1)` table of real weights
    pub mu: Vec<Vec<Vec<f64>>>,
}

impl MeasureJson {
    pub fn from(m: &KMeasure) -> Self {
        let dim = m.algebra.dim();
        MeasureJson {
            algebra: m.algebra,
            points: m.labels.clone(),
            mu: m
                .weights
                .iter()
                .map(|w| {
                    (0..dim)
                        .map(|v| (0..dim).map(|l| w[(v, l)]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<KMeasure> {
        let dim = self.algebra.dim();
        let weights = self
            .mu
            .iter()
            .map(|per_point| {
                if per_point.len() != dim || per_point.iter().any(|row| row.len() != dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: per_point.len(),
                    });
                }
                let mut w = DMatrix::zeros(dim, dim);
                for (v, row) in per_point.iter().enumerate() {
                    for (l, value) in row.iter().enumerate() {
                        w[(v, l)] = *value;
                    }
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        KMeasure::new(self.algebra, self.points.clone(), weights)
    }
}

/// Serializes a JSON value with every number printed at 17 significant
/// digits, so reports are deterministic and round-trip bit-exactly.
pub fn to_json_17(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &serde_json::Value, out: &mut String) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                if f.is_finite() {
                    out.push_str(&format!("{f:.16e}"));
                } else {
                    out.push_str("null");
                }
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push(':');
                write_value(v, out);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrips_are_bit_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(120);
        for a in Algebra::both() {
            let z = sample::hypercomplex(a, &mut rng);
            let json = serde_json::to_string(&HypercomplexJson::from(&z)).unwrap();
            let back: HypercomplexJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap(), z);

            let x = sample::kvector(a, 3, &mut rng);
            let json = serde_json::to_string(&KVectorJson::from(&x)).unwrap();
            let back: KVectorJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap(), x);

            let t = sample::quasilinear(a, 2, &mut rng);
            let json = serde_json::to_string(&OperatorJson::from_rep(&t)).unwrap();
            let back: OperatorJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap(), t);
        }
    }

    #[test]
    fn seventeen_digit_numbers_roundtrip() {
        let vals = [1.0, -0.1, std::f64::consts::PI, 2.2250738585072014e-308, 12345.678_912_345_678];
        for v in vals {
            let text = to_json_17(&serde_json::json!(v));
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{text}");
        }
        let obj = serde_json::json!({"a": [1.5, 2], "b": "x"});
        assert_eq!(to_json_17(&obj), "{\"a\":[1.5000000000000000e0,2],\"b\":\"x\"}");
    }

    #[test]
    fn entries_form_builds_left_multiplication() {
        let json = r#"{"algebra":"H","n":1,"entries":[[[0.0,1.0,0.0,0.0]]]}"#;
        let t: OperatorJson = serde_json::from_str(json).unwrap();
        let op = t.build().unwrap();
        let i = Hypercomplex::generator(Algebra::Quaternion, 1);
        let want = QuasilinearOp::left_diagonal(&[i]).unwrap();
        assert_eq!(op, want);
        assert_eq!(t.diagonal().unwrap(), vec![i]);
    }
}
