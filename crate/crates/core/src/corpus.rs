//! Test functions with known large-`x` behavior, and the JSON coefficient
//! file format.
//!
//! Every corpus function has the form `c + sum_j a_j / (x + b_j)`, so its
//! Taylor coefficients, its asymptote `c + (sum_j a_j)/x + O(1/x^2)`, and the
//! analyticity radius of `v(z) = f(1/z + x0 - 1)` are all exact.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, MIN_FLOAT_PRECISION};
use crate::series::TaylorSeries;

#[derive(Clone, Debug, PartialEq)]
pub enum CorpusKind {
    /// `(alpha x + beta) / (gamma x + delta)`, `gamma != 0`.
    Mobius {
        alpha: Scalar,
        beta: Scalar,
        gamma: Scalar,
        delta: Scalar,
    },
    /// `c + a / (x + b)`.
    ShiftedReciprocal { c: Scalar, a: Scalar, b: Scalar },
    /// `c + sum_j a_j / (x + b_j)`.
    ReciprocalSum {
        c: Scalar,
        terms: Vec<(Scalar, Scalar)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusFunction {
    kind: CorpusKind,
    constant: Scalar,
    terms: Vec<(Scalar, Scalar)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HypothesisRadius {
    Infinite,
    Finite(Scalar),
}

impl HypothesisRadius {
    /// The hypothesis asks for a radius strictly above 2.
    pub fn satisfied(&self) -> bool {
        match self {
            HypothesisRadius::Infinite => true,
            HypothesisRadius::Finite(r) => *r > Scalar::int(2),
        }
    }

    pub fn parse(s: &str) -> Result<Self, crate::scalar::ScalarError> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(HypothesisRadius::Infinite)
        } else {
            Scalar::parse_exact(s).map(HypothesisRadius::Finite)
        }
    }
}

impl fmt::Display for HypothesisRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisRadius::Infinite => f.write_str("inf"),
            HypothesisRadius::Finite(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub center: Scalar,
    pub radius: HypothesisRadius,
    pub satisfied: bool,
}

impl CorpusFunction {
    pub fn mobius(alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::DegenerateMobius);
        }
        let c = alpha.checked_div(&gamma)?;
        let a = (&beta * &gamma - &alpha * &delta).checked_div(&(&gamma * &gamma))?;
        let b = delta.checked_div(&gamma)?;
        Ok(CorpusFunction {
            kind: CorpusKind::Mobius {
                alpha,
                beta,
                gamma,
                delta,
            },
            constant: c,
            terms: vec![(a, b)],
        })
    }

    pub fn shifted_reciprocal(c: Scalar, a: Scalar, b: Scalar) -> Self {
        CorpusFunction {
            constant: c.clone(),
            terms: vec![(a.clone(), b.clone())],
            kind: CorpusKind::ShiftedReciprocal { c, a, b },
        }
    }

    /// `c + sum a_j / (x + b_j)` for `(a_j, b_j)` in `terms`.
    pub fn reciprocal_sum(c: Scalar, terms: Vec<(Scalar, Scalar)>) -> Self {
        CorpusFunction {
            constant: c.clone(),
            terms: terms.clone(),
            kind: CorpusKind::ReciprocalSum { c, terms },
        }
    }

    pub fn kind(&self) -> &CorpusKind {
        &self.kind
    }

    /// Points where some `x + b_j` vanishes.
    pub fn poles(&self) -> impl Iterator<Item = Scalar> + '_ {
        self.terms.iter().map(|(_, b)| -b)
    }

    fn check_pole(&self, x: &Scalar) -> Result<()> {
        if self.terms.iter().any(|(_, b)| (x + b).is_zero()) {
            return Err(Error::Pole {
                x: x.to_plain_string(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &Scalar) -> Result<Scalar> {
        self.check_pole(x)?;
        let mut acc = self.constant.clone();
        for (a, b) in &self.terms {
            acc = acc + a.checked_div(&(x + b))?;
        }
        Ok(acc)
    }

    /// `c_0..c_{n-1}` about `x0`: `c_0 = f(x0)`,
    /// `c_k = sum_j a_j (-1)^k / (x0 + b_j)^{k+1}`.
    pub fn taylor_coeffs(&self, x0: &Scalar, n: usize) -> Result<TaylorSeries> {
        if n < 1 {
            return Err(Error::OrderTooSmall {
                what: "number of coefficients",
                min: 1,
                got: n,
            });
        }
        self.check_pole(x0)?;
        let mut coeffs = vec![self.constant.clone(); 1];
        coeffs.resize(n, Scalar::zero());
        for (a, b) in &self.terms {
            let r = (x0 + b).recip()?;
            let mut term = a * &r;
            for (k, slot) in coeffs.iter_mut().enumerate() {
                *slot = if k % 2 == 0 {
                    &*slot + &term
                } else {
                    &*slot - &term
                };
                term = term * &r;
            }
        }
        let hint = match self.hypothesis_radius(x0) {
            HypothesisRadius::Finite(r) => Some(r),
            HypothesisRadius::Infinite => None,
        };
        Ok(TaylorSeries::new(x0.clone(), coeffs)?.with_radius_hint(hint))
    }

    /// `(q0, q1)` with `f(x) = q0 + q1/x + O(1/x^2)`.
    pub fn known_asymptote(&self) -> (Scalar, Scalar) {
        (
            self.constant.clone(),
            self.terms.iter().map(|(a, _)| a.clone()).sum(),
        )
    }

    /// Radius of the disk about 0 where `v(z) = f(1/z + x0 - 1)` is analytic.
    /// Term `j` has its pole at `z = -1 / (b_j + x0 - 1)`.
    pub fn hypothesis_radius(&self, x0: &Scalar) -> HypothesisRadius {
        self.terms
            .iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(_, b)| b + x0 - Scalar::one())
            .filter(|d| !d.is_zero())
            .map(|d| d.abs().recip().expect("nonzero"))
            .min_by(|x, y| x.cmp_value(y))
            .map_or(HypothesisRadius::Infinite, HypothesisRadius::Finite)
    }

    pub fn hypothesis_report(&self, x0: &Scalar) -> HypothesisReport {
        let radius = self.hypothesis_radius(x0);
        HypothesisReport {
            center: x0.clone(),
            satisfied: radius.satisfied(),
            radius,
        }
    }

    /// Human-readable formula.
    pub fn describe(&self) -> String {
        match &self.kind {
            CorpusKind::Mobius {
                alpha,
                beta,
                gamma,
                delta,
            } => {
                format!("({alpha}*x + {beta}) / ({gamma}*x + {delta})")
            }
            CorpusKind::ShiftedReciprocal { c, a, b } => format!("{c} + {a} / (x + {b})"),
            CorpusKind::ReciprocalSum { c, terms } => {
                let mut s = c.to_string();
                for (a, b) in terms {
                    s.push_str(&format!(" + {a} / (x + {b})"));
                }
                s
            }
        }
    }

    /// Resolves a named selector. `params` is a comma-separated scalar list
    /// for `mobius` (alpha,beta,gamma,delta), `shifted-reciprocal` (c,a,b)
    /// and `reciprocal-sum` (c,a1,b1,a2,b2,...).
    pub fn from_selector(name: &str, params: Option<&str>) -> Result<Self> {
        let bad = |message: String| Error::BadParams {
            function: name.to_string(),
            message,
        };
        let parsed: Option<Vec<Scalar>> = params
            .map(|p| {
                p.split(',')
                    .map(|s| Scalar::parse_exact(s).map_err(|e| bad(e.to_string())))
                    .collect::<Result<_>>()
            })
            .transpose()?;
        let needs = |n: usize| -> Result<Vec<Scalar>> {
            match &parsed {
                Some(v) if v.len() == n => Ok(v.clone()),
                Some(v) => Err(bad(format!("expected {n} values, got {}", v.len()))),
                None => Err(bad(format!("--params with {n} values is required"))),
            }
        };
        let no_params = || -> Result<()> {
            match parsed {
                Some(_) => Err(bad("takes no parameters".into())),
                None => Ok(()),
            }
        };
        match name {
            "one-over-x" => {
                no_params()?;
                Ok(Self::shifted_reciprocal(
                    Scalar::zero(),
                    Scalar::one(),
                    Scalar::zero(),
                ))
            }
            "reciprocal-quarter" => {
                no_params()?;
                Ok(Self::shifted_reciprocal(
                    Scalar::zero(),
                    Scalar::one(),
                    Scalar::ratio(1, 4),
                ))
            }
            "x-over-x-plus-one" => {
                no_params()?;
                Self::mobius(Scalar::one(), Scalar::zero(), Scalar::one(), Scalar::one())
            }
            "mobius" => {
                let [a, b, c, d]: [Scalar; 4] = needs(4)?.try_into().expect("length checked");
                Self::mobius(a, b, c, d)
            }
            "shifted-reciprocal" => {
                let [c, a, b]: [Scalar; 3] = needs(3)?.try_into().expect("length checked");
                Ok(Self::shifted_reciprocal(c, a, b))
            }
            "reciprocal-sum" => {
                let v = parsed.ok_or_else(|| bad("--params c,a1,b1,... is required".into()))?;
                if v.len() % 2 == 0 {
                    return Err(bad("expected c followed by (a, b) pairs".into()));
                }
                let terms = v[1..]
                    .chunks(2)
                    .map(|p| (p[0].clone(), p[1].clone()))
                    .collect();
                Ok(Self::reciprocal_sum(v[0].clone(), terms))
            }
            _ => {
                if let Some(rest) = name.strip_prefix("mobius-") {
                    no_params()?;
                    let parts: Vec<&str> = rest.split('-').collect();
                    if parts.len() == 4 {
                        let v: Vec<Scalar> = parts
                            .iter()
                            .map(|s| Scalar::parse_exact(s).map_err(|e| bad(e.to_string())))
                            .collect::<Result<_>>()?;
                        let [a, b, c, d]: [Scalar; 4] = v.try_into().expect("length checked");
                        return Self::mobius(a, b, c, d);
                    }
                }
                Err(Error::UnknownFunction(name.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub function: CorpusFunction,
    pub center: Scalar,
}

/// The shipped corpus: 1/x at 1 and 5/4, 1/(x + 1/4) at 1, x/(x + 1) at 1,
/// and (2x + 3)/(x + 2) at 1 and 3/2.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let sel = |n: &str| CorpusFunction::from_selector(n, None).expect("built-in selector");
    vec![
        CorpusEntry {
            name: "one-over-x",
            function: sel("one-over-x"),
            center: Scalar::one(),
        },
        CorpusEntry {
            name: "one-over-x",
            function: sel("one-over-x"),
            center: Scalar::ratio(5, 4),
        },
        CorpusEntry {
            name: "reciprocal-quarter",
            function: sel("reciprocal-quarter"),
            center: Scalar::one(),
        },
        CorpusEntry {
            name: "x-over-x-plus-one",
            function: sel("x-over-x-plus-one"),
            center: Scalar::one(),
        },
        CorpusEntry {
            name: "mobius-2-3-1-2",
            function: sel("mobius-2-3-1-2"),
            center: Scalar::one(),
        },
        CorpusEntry {
            name: "mobius-2-3-1-2",
            function: sel("mobius-2-3-1-2"),
            center: Scalar::ratio(3, 2),
        },
    ]
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    center: String,
    coeffs: Vec<String>,
    exact: bool,
    #[serde(default)]
    meta: RawMeta,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    #[serde(default)]
    hypothesis_radius: Option<String>,
    #[serde(default)]
    description: String,
}

/// A coefficient file: the series plus optional hypothesis metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFile {
    pub series: TaylorSeries,
    pub hypothesis_radius: Option<HypothesisRadius>,
    pub description: String,
}

impl CoefficientFile {
    pub fn new(series: TaylorSeries) -> Self {
        CoefficientFile {
            series,
            hypothesis_radius: None,
            description: String::new(),
        }
    }

    pub fn from_corpus(f: &CorpusFunction, x0: &Scalar, n: usize) -> Result<Self> {
        Ok(CoefficientFile {
            series: f.taylor_coeffs(x0, n)?,
            hypothesis_radius: Some(f.hypothesis_radius(x0)),
            description: f.describe(),
        })
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let raw = RawFile {
            center: self.series.center().to_plain_string(),
            coeffs: self
                .series
                .coeffs()
                .iter()
                .map(Scalar::to_plain_string)
                .collect(),
            exact: self.series.is_exact(),
            meta: RawMeta {
                hypothesis_radius: self.hypothesis_radius.as_ref().map(ToString::to_string),
                description: self.description.clone(),
            },
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("plain strings serialize");
        s.push('\n');
        s
    }

    /// Parses file contents; `path` is used only in diagnostics. Float files
    /// are read at `float_precision` bits.
    pub fn from_json(text: &str, path: &Path, float_precision: usize) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field_err = |field: String, message: String| Error::Field {
            path: path.to_path_buf(),
            field,
            message,
        };
        if !raw.exact && float_precision < MIN_FLOAT_PRECISION {
            return Err(field_err(
                "exact".into(),
                format!("float precision must be at least {MIN_FLOAT_PRECISION} bits, got {float_precision}"),
            ));
        }
        let parse = |field: String, s: &str| {
            let r = if raw.exact {
                Scalar::parse_exact(s)
            } else {
                Scalar::parse_float(s, float_precision)
            };
            r.map_err(|e| field_err(field, e.to_string()))
        };
        if raw.coeffs.is_empty() {
            return Err(field_err(
                "coeffs".into(),
                "at least one coefficient is required".into(),
            ));
        }
        let center = parse("center".into(), &raw.center)?;
        let coeffs = raw
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, s)| parse(format!("coeffs[{i}]"), s))
            .collect::<Result<Vec<_>>>()?;
        let hypothesis_radius = raw
            .meta
            .hypothesis_radius
            .as_deref()
            .map(|s| {
                HypothesisRadius::parse(s)
                    .map_err(|e| field_err("meta.hypothesis_radius".into(), e.to_string()))
            })
            .transpose()?;
        let hint = match &hypothesis_radius {
            Some(HypothesisRadius::Finite(r)) => Some(r.clone()),
            _ => None,
        };
        Ok(CoefficientFile {
            series: TaylorSeries::new(center, coeffs)?.with_radius_hint(hint),
            hypothesis_radius,
            description: raw.meta.description,
        })
    }
}

pub fn load_coefficient_file(path: &Path, float_precision: usize) -> Result<CoefficientFile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    CoefficientFile::from_json(&text, path, float_precision)
}

pub fn save_coefficient_file(file: &CoefficientFile, path: &Path) -> Result<()> {
    fs::write(path, file.to_json()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
