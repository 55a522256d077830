use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, BigFloat, Real};

use super::{coords, index, triangle_count, TriGrid};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleDocument {
    pub r: usize,
    pub d: usize,
    #[serde(rename = "L")]
    pub left: String,
    #[serde(rename = "R")]
    pub right: String,
    #[serde(rename = "B")]
    pub base: String,
}

/// Serialized form of a grid; triangles are listed in (r, d) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDocument {
    pub n: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub triangles: Vec<TriangleDocument>,
}

/// A grid in either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGrid {
    Exact(TriGrid<Rational>),
    Float(TriGrid<BigFloat>),
}

impl From<TriGrid<Rational>> for AnyGrid {
    fn from(g: TriGrid<Rational>) -> Self {
        AnyGrid::Exact(g)
    }
}

impl From<TriGrid<BigFloat>> for AnyGrid {
    fn from(g: TriGrid<BigFloat>) -> Self {
        AnyGrid::Float(g)
    }
}

/// Enough decimal digits for a float to survive a round trip.
fn round_trip_digits(precision_bits: u32) -> usize {
    (precision_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

fn document<S: Real>(
    g: &TriGrid<S>,
    precision_bits: Option<u32>,
    fmt: impl Fn(&S) -> String,
) -> GridDocument {
    GridDocument {
        n: g.n(),
        mode: g.mode().name().to_string(),
        precision_bits,
        triangles: g
            .iter()
            .map(|((r, d), [l, rt, b])| TriangleDocument {
                r,
                d,
                left: fmt(l),
                right: fmt(rt),
                base: fmt(b),
            })
            .collect(),
    }
}

impl AnyGrid {
    pub fn n(&self) -> usize {
        match self {
            AnyGrid::Exact(g) => g.n(),
            AnyGrid::Float(g) => g.n(),
        }
    }

    pub fn to_document(&self) -> GridDocument {
        match self {
            AnyGrid::Exact(g) => document(g, None, |q| q.to_string()),
            AnyGrid::Float(g) => {
                let prec = g.labels()[0][0].precision();
                let digits = round_trip_digits(prec);
                document(g, Some(prec), |x| x.to_sig_string(digits))
            }
        }
    }

    pub fn from_document(doc: &GridDocument) -> Result<Self> {
        if doc.n == 0 {
            return Err(Error::Document("n must be at least 1".into()));
        }
        if doc.triangles.len() != triangle_count(doc.n) {
            return Err(Error::Document(format!(
                "expected {} triangles, found {}",
                triangle_count(doc.n),
                doc.triangles.len()
            )));
        }
        let mut order: Vec<Option<&TriangleDocument>> = vec![None; doc.triangles.len()];
        for t in &doc.triangles {
            if t.d < 1 || t.d > t.r || t.r > doc.n {
                return Err(Error::Document(format!(
                    "triangle <{},{}> outside a {}-grid",
                    t.r, t.d, doc.n
                )));
            }
            let slot = &mut order[index(t.r, t.d)];
            if slot.is_some() {
                return Err(Error::Document(format!(
                    "duplicate triangle <{},{}>",
                    t.r, t.d
                )));
            }
            *slot = Some(t);
        }
        let triangles: Vec<&TriangleDocument> = order.into_iter().flatten().collect();
        debug_assert_eq!(triangles.len(), coords(doc.n).count());
        match doc.mode.as_str() {
            "exact" => {
                let labels = triangles
                    .iter()
                    .map(|t| {
                        Ok([
                            parse_rational(&t.left)?,
                            parse_rational(&t.right)?,
                            parse_rational(&t.base)?,
                        ])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyGrid::Exact(TriGrid::new(doc.n, labels)?))
            }
            "float" => {
                let prec = doc
                    .precision_bits
                    .ok_or_else(|| Error::Document("float grid without precision_bits".into()))?;
                let labels = triangles
                    .iter()
                    .map(|t| {
                        Ok([
                            BigFloat::parse(&t.left, prec)?,
                            BigFloat::parse(&t.right, prec)?,
                            BigFloat::parse(&t.base, prec)?,
                        ])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyGrid::Float(TriGrid::new(doc.n, labels)?))
            }
            other => Err(Error::Document(format!("unknown mode {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GridDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }
}
