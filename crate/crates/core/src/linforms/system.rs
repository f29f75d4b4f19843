use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::ExactRational;

/// `psi(n) = constant + sum_j linear[j] * n_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub linear: Vec<BigInt>,
    pub constant: BigInt,
}

impl AffineForm {
    pub fn new<I: Into<BigInt>>(linear: impl IntoIterator<Item = I>, constant: impl Into<BigInt>) -> Self {
        AffineForm {
            linear: linear.into_iter().map(Into::into).collect(),
            constant: constant.into(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, point: &[i64]) -> BigInt {
        self.linear
            .iter()
            .zip(point)
            .fold(self.constant.clone(), |acc, (a, &x)| acc + a * x)
    }

    /// Coefficient on `e_j` with the constant removed.
    pub fn linear_part(&self) -> &[BigInt] {
        &self.linear
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSystem {
    dimension: usize,
    forms: Vec<AffineForm>,
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    d: usize,
    forms: Vec<FormFile>,
}

#[derive(Serialize, Deserialize)]
struct FormFile {
    linear: Vec<i64>,
    #[serde(rename = "const")]
    constant: i64,
}

impl AffineSystem {
    pub fn new(dimension: usize, forms: Vec<AffineForm>) -> Result<AffineSystem> {
        if dimension == 0 {
            return invalid("system dimension must be at least 1");
        }
        if forms.is_empty() {
            return invalid("system needs at least one form");
        }
        if let Some((i, f)) = forms.iter().enumerate().find(|(_, f)| f.dimension() != dimension) {
            return invalid(format!(
                "form {i} has {} coefficients, expected {dimension}",
                f.dimension()
            ));
        }
        Ok(AffineSystem { dimension, forms })
    }

    /// Convenience constructor from small integer rows `(linear, constant)`.
    pub fn from_rows(rows: &[(&[i64], i64)]) -> Result<AffineSystem> {
        let d = rows.first().map_or(0, |r| r.0.len());
        let forms = rows
            .iter()
            .map(|(lin, c)| AffineForm::new(lin.iter().copied(), *c))
            .collect();
        AffineSystem::new(d, forms)
    }

    /// Parses `{"d":2,"forms":[{"linear":[1,0],"const":0}, ...]}`.
    pub fn from_json(text: &str) -> Result<AffineSystem> {
        let file: SystemFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad system file: {e}")))?;
        let forms = file
            .forms
            .into_iter()
            .map(|f| AffineForm::new(f.linear, f.constant))
            .collect();
        AffineSystem::new(file.d, forms)
    }

    pub fn to_json(&self) -> Result<String> {
        let small = |x: &BigInt| {
            x.to_i64()
                .ok_or_else(|| Error::TooLarge(format!("coefficient {x} does not fit the file format")))
        };
        let forms = self
            .forms
            .iter()
            .map(|f| {
                Ok(FormFile {
                    linear: f.linear.iter().map(small).collect::<Result<_>>()?,
                    constant: small(&f.constant)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(serde_json::to_string(&SystemFile { d: self.dimension, forms }).expect("serializable"))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    pub fn permuted(&self, order: &[usize]) -> AffineSystem {
        AffineSystem {
            dimension: self.dimension,
            forms: order.iter().map(|&i| self.forms[i].clone()).collect(),
        }
    }
}

/// `sum_i sum_j |psi_i'(e_j)| + sum_i |psi_i(0) / N|`.
pub fn size_norm(system: &AffineSystem, n: u64) -> Result<ExactRational> {
    if n == 0 {
        return invalid("scale N must be positive");
    }
    let linear: BigInt = system
        .forms
        .iter()
        .flat_map(|f| f.linear.iter())
        .map(|a| a.abs())
        .sum();
    let constants: BigInt = system.forms.iter().map(|f| f.constant.abs()).sum();
    Ok(ExactRational::from_integer(linear) + ExactRational::new(constants, n))
}
