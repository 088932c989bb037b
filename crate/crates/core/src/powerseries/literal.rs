//! Term-literal format shared by reports and job files.
//!
//! A term is `[[q_1, ..., q_n], "re", "im"]`. Exact mode writes rationals
//! (`"p"` or `"p/q"`), float mode writes decimals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Matrix, Multiindex, TruncatedMap, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLiteral(pub Vec<u32>, pub String, pub String);

pub type SeriesLiteral = Vec<TermLiteral>;
pub type MapLiteral = Vec<SeriesLiteral>;
/// Rows of `[re, im]` pairs.
pub type MatrixLiteral = Vec<Vec<(String, String)>>;

impl<S: Scalar> TruncatedSeries<S> {
    pub fn from_literal(lit: &[TermLiteral], n: usize, degree: usize, ctx: &S::Ctx) -> Result<Self> {
        let mut terms = Vec::with_capacity(lit.len());
        for TermLiteral(q, re, im) in lit {
            if q.len() != n {
                return Err(Error::Parse(format!(
                    "exponent vector {q:?} has length {}, expected {n}",
                    q.len()
                )));
            }
            terms.push((Multiindex::new(q.clone()), S::parse(re, im, ctx)?));
        }
        TruncatedSeries::from_terms(n, degree, ctx, terms)
    }

    pub fn to_literal(&self) -> SeriesLiteral {
        self.terms()
            .map(|(q, c)| {
                let (re, im) = c.to_literal();
                TermLiteral(q.to_vec(), re, im)
            })
            .collect()
    }
}

impl<S: Scalar> TruncatedMap<S> {
    pub fn from_literal(lit: &MapLiteral, degree: usize, ctx: &S::Ctx) -> Result<Self> {
        let n = lit.len();
        let components = lit
            .iter()
            .map(|s| TruncatedSeries::from_literal(s, n, degree, ctx))
            .collect::<Result<Vec<_>>>()?;
        TruncatedMap::new(components)
    }

    pub fn to_literal(&self) -> MapLiteral {
        self.components().iter().map(TruncatedSeries::to_literal).collect()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn from_literal(lit: &MatrixLiteral, ctx: &S::Ctx) -> Result<Self> {
        let rows = lit
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(re, im)| S::parse(re, im, ctx))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows).map_err(|e| Error::Parse(format!("matrix is not square: {e}")))
    }

    pub fn to_literal(&self) -> MatrixLiteral {
        self.rows()
            .iter()
            .map(|row| row.iter().map(S::to_literal).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, FloatComplex, FloatCtx, GaussianRational};

    #[test]
    fn roundtrip_exact() {
        let json = r#"[[[[0,2],"-7/4","0"],[[1,0],"2","0"]],[[[0,1],"1/2","0"]]]"#;
        let lit: MapLiteral = serde_json::from_str(json).unwrap();
        let f = TruncatedMap::<GaussianRational>::from_literal(&lit, 4, &ExactCtx::default()).unwrap();
        assert_eq!(f.to_literal(), lit);
    }

    #[test]
    fn malformed_exponents() {
        let lit = vec![vec![TermLiteral(vec![1, 0, 0], "1".into(), "0".into())], vec![]];
        let err = TruncatedMap::<GaussianRational>::from_literal(&lit, 3, &ExactCtx::default());
        assert!(matches!(err, Err(Error::Parse(_))));
    }

    #[test]
    fn exact_mode_rejects_decimals() {
        let lit = vec![vec![TermLiteral(vec![1], "0.5".into(), "0".into())]];
        assert!(TruncatedMap::<GaussianRational>::from_literal(&lit, 3, &ExactCtx::default()).is_err());
        assert!(TruncatedMap::<FloatComplex>::from_literal(&lit, 3, &FloatCtx::default()).is_ok());
    }
}
