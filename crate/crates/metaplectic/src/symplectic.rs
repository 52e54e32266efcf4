//! Real symplectic matrices in `d × d` block form.
//!
//! A `2d × 2d` real matrix `S = [[A, B], [C, D]]` is symplectic when
//! `Sᵀ J S = J` for the standard form `J = [[0, I], [-I, 0]]`. Equivalently
//! `AᵀC` and `BᵀD` are symmetric and `AᵀD - CᵀB = I`; those relations are what
//! the validator checks, block by block, so failures point at a concrete block.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for the symplectic relations, scaled by the matrix magnitude.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// A validated symplectic matrix stored as four `d × d` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    d: usize,
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    dd: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Builds a symplectic matrix from its blocks, validating the relations
    /// at the default tolerance.
    pub fn from_blocks(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
    ) -> Result<Self> {
        Self::from_blocks_with_tol(a, b, c, d, SYMPLECTIC_TOL)
    }

    /// Builds a symplectic matrix, validating at a caller-chosen tolerance.
    pub fn from_blocks_with_tol(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
        tol: f64,
    ) -> Result<Self> {
        let n = a.nrows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::dim(
                    format!("block {name}"),
                    format!("{n}x{n}"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::Data {
                    reason: format!("block {name} contains a non-finite entry"),
                });
            }
        }
        if n == 0 {
            return Err(Error::InvalidGrid {
                reason: "dimension d must be at least 1".into(),
            });
        }
        let candidate = SymplecticMatrix { d: n, a, b, c, dd: d };
        let deviation = candidate.symplectic_defect();
        let scale = candidate.max_abs().max(1.0);
        if deviation > tol * scale * scale {
            return Err(Error::NotSymplectic {
                deviation,
                tol: tol * scale * scale,
            });
        }
        Ok(candidate)
    }

    /// Parses the JSON block encoding `{"d": .., "A": [[..]], ..}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SymplecticMatrixJson = serde_json::from_str(text)?;
        raw.into_matrix()
    }

    /// Serializes to the JSON block encoding.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SymplecticMatrixJson::from_matrix(self))
            .expect("block encoding is always serializable")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    /// The lower-right block. Named `d_block` because `d` is taken by the dimension.
    pub fn d_block(&self) -> &DMatrix<f64> {
        &self.dd
    }

    /// Largest absolute entry across all four blocks.
    pub fn max_abs(&self) -> f64 {
        [&self.a, &self.b, &self.c, &self.dd]
            .iter()
            .flat_map(|m| m.iter())
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// Max-norm violation of the three block relations
    /// `AᵀC = CᵀA`, `BᵀD = DᵀB`, `AᵀD - CᵀB = I`.
    pub fn symplectic_defect(&self) -> f64 {
        let atc = self.a.transpose() * &self.c;
        let btd = self.b.transpose() * &self.dd;
        let atd_ctb = self.a.transpose() * &self.dd - self.c.transpose() * &self.b;
        let sym_defect = |m: &DMatrix<f64>| -> f64 {
            let mt = m.transpose();
            (m - mt).amax()
        };
        let mut defect = sym_defect(&atc).max(sym_defect(&btd));
        let eye = DMatrix::<f64>::identity(self.d, self.d);
        defect = defect.max((atd_ctb - eye).amax());
        defect
    }

    /// The exact inverse `[[Dᵀ, -Bᵀ], [-Cᵀ, Aᵀ]]`; no linear solve is involved.
    pub fn inverse(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            d: self.d,
            a: self.dd.transpose(),
            b: -self.b.transpose(),
            c: -self.c.transpose(),
            dd: self.a.transpose(),
        }
    }

    /// Matrix product `self * other`, revalidated at a tolerance that allows
    /// for rounding in the multiply.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.d != other.d {
            return Err(Error::dim(
                "compose",
                format!("d = {}", self.d),
                format!("d = {}", other.d),
            ));
        }
        let a = &self.a * &other.a + &self.b * &other.c;
        let b = &self.a * &other.b + &self.b * &other.dd;
        let c = &self.c * &other.a + &self.dd * &other.c;
        let d = &self.c * &other.b + &self.dd * &other.dd;
        SymplecticMatrix::from_blocks_with_tol(a, b, c, d, 1e-8)
    }

    /// Assembles the dense `2d × 2d` matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.d;
        let mut m = DMatrix::<f64>::zeros(2 * d, 2 * d);
        m.view_mut((0, 0), (d, d)).copy_from(&self.a);
        m.view_mut((0, d), (d, d)).copy_from(&self.b);
        m.view_mut((d, 0), (d, d)).copy_from(&self.c);
        m.view_mut((d, d), (d, d)).copy_from(&self.dd);
        m
    }
}

/// Checks the symplectic relations of four raw blocks without constructing
/// the validated type; returns the max violation on failure.
pub fn validate_symplectic(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    tol: f64,
) -> Result<()> {
    SymplecticMatrix::from_blocks_with_tol(a.clone(), b.clone(), c.clone(), d.clone(), tol)
        .map(|_| ())
}

/// JSON wire form: row-major blocks plus the dimension, all entries finite.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymplecticMatrixJson {
    d: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    dd: Vec<Vec<f64>>,
}

impl SymplecticMatrixJson {
    fn into_matrix(self) -> Result<SymplecticMatrix> {
        if self.d == 0 || self.d > crate::grid::MAX_DIM {
            return Err(Error::Data {
                reason: format!("dimension {} outside supported range 1..={}", self.d, crate::grid::MAX_DIM),
            });
        }
        let build = |name: &str, rows: &Vec<Vec<f64>>| -> Result<DMatrix<f64>> {
            if rows.len() != self.d || rows.iter().any(|r| r.len() != self.d) {
                return Err(Error::dim(
                    format!("json block {name}"),
                    format!("{0}x{0}", self.d),
                    format!("{} rows", rows.len()),
                ));
            }
            Ok(DMatrix::from_fn(self.d, self.d, |i, j| rows[i][j]))
        };
        SymplecticMatrix::from_blocks(
            build("A", &self.a)?,
            build("B", &self.b)?,
            build("C", &self.c)?,
            build("D", &self.dd)?,
        )
    }

    fn from_matrix(m: &SymplecticMatrix) -> Self {
        let dump = |mat: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.d).map(|i| (0..m.d).map(|j| mat[(i, j)]).collect()).collect()
        };
        SymplecticMatrixJson {
            d: m.d,
            a: dump(&m.a),
            b: dump(&m.b),
            c: dump(&m.c),
            dd: dump(&m.dd),
        }
    }
}
