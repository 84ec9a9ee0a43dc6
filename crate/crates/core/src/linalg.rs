//! Dense linear algebra for small symmetric positive-definite systems.
//!
//! Everything here is sized for the problems this crate targets (d up to a
//! few dozen): dense storage, double precision, no attempt at sparsity or
//! blocking. Symmetry is structural — [`SymMatrix`] stores one triangle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for accepting a claimed exact solution.
const EXACT_SOLUTION_RTOL: f64 = 1e-10;
/// Absolute tolerance for the symmetry check on loaded matrices.
const SYMMETRY_ATOL: f64 = 1e-12;
/// Cholesky pivots must exceed this fraction of the largest diagonal entry.
const SPD_PIVOT_RTOL: f64 = 1e-12;

/// Real vector with finite entries and dimension ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension { context: "vector" });
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "vector",
                index,
            });
        }
        Ok(Vector(entries))
    }

    /// All-zero vector of dimension `d` (`d ≥ 1`).
    pub fn zeros(d: usize) -> Self {
        assert!(d >= 1, "vector dimension must be at least 1");
        Vector(vec![0.0; d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length ≥ 1 by construction
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// max_i |v_i|
    pub fn inf_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Dot product; dimensions must agree.
    pub fn dot(&self, other: &Vector) -> Result<f64> {
        check_dims("dot", self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    /// max_i |self_i − other_i|
    pub fn inf_distance(&self, other: &Vector) -> Result<f64> {
        check_dims("inf_distance", self.len(), other.len())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        Vector::new(entries)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Vec<f64> {
        v.0
    }
}

fn check_dims(context: &'static str, left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch {
            context,
            left,
            right,
        });
    }
    Ok(())
}

/// Symmetric d×d matrix, stored as the packed lower triangle so that
/// `a(i,j) = a(j,i)` holds structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    // row-major lower triangle: (i, j) with j ≤ i lives at i*(i+1)/2 + j
    lower: Vec<f64>,
}

impl SymMatrix {
    /// Build from full row-major storage, validating squareness, finiteness
    /// and symmetry to within `SYMMETRY_ATOL` (1e-12 absolute).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::EmptyDimension { context: "matrix" });
        }
        for (i, row) in rows.iter().enumerate() {
            check_dims("matrix row length", row.len(), d)?;
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    context: "matrix",
                    index: i * d + j,
                });
            }
        }
        for i in 0..d {
            for j in 0..i {
                if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_ATOL {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        upper: rows[j][i],
                        lower: rows[i][j],
                    });
                }
            }
        }
        Ok(Self::from_fn(d, |i, j| rows[i][j]))
    }

    /// Build from a function of the (row, column) index; only the lower
    /// triangle (`j ≤ i`) is evaluated.
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(d >= 1, "matrix dimension must be at least 1");
        let mut lower = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in 0..=i {
                lower.push(f(i, j));
            }
        }
        SymMatrix { dim: d, lower }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        self.lower[hi * (hi + 1) / 2 + lo]
    }

    /// Full row-major copy (for serialization).
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// A·v
    pub fn mat_vec(&self, v: &Vector) -> Result<Vector> {
        check_dims("mat_vec", self.dim, v.len())?;
        let out = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v.get(j)).sum())
            .collect();
        Ok(Vector(out))
    }

    /// vᵀAv
    pub fn quadratic_form(&self, v: &Vector) -> Result<f64> {
        check_dims("quadratic_form", self.dim, v.len())?;
        let mut acc = 0.0;
        for i in 0..self.dim {
            // diagonal once, off-diagonal twice by symmetry
            acc += self.get(i, i) * v.get(i) * v.get(i);
            for j in 0..i {
                acc += 2.0 * self.get(i, j) * v.get(i) * v.get(j);
            }
        }
        Ok(acc)
    }

    /// Packed-lower Cholesky factor, or the failing pivot.
    fn cholesky_lower(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let max_diag = (0..d).map(|i| self.get(i, i)).fold(f64::NEG_INFINITY, f64::max);
        let tol = SPD_PIVOT_RTOL * max_diag.max(0.0);
        let idx = |i: usize, j: usize| i * (i + 1) / 2 + j;
        let mut l = vec![0.0; d * (d + 1) / 2];
        for i in 0..d {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[idx(i, k)] * l[idx(j, k)];
                }
                if i == j {
                    if !(s > tol && s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                    }
                    l[idx(i, j)] = s.sqrt();
                } else {
                    l[idx(i, j)] = s / l[idx(j, j)];
                }
            }
        }
        Ok(l)
    }

    /// True iff Cholesky factorization completes with strictly positive
    /// pivots (pivot > 1e-12 × max diagonal).
    pub fn is_spd(&self) -> bool {
        self.cholesky_lower().is_ok()
    }
}

/// A symmetric positive-definite system `A x = b`, optionally carrying the
/// known exact solution of synthetic instances.
#[derive(Debug, Clone)]
pub struct SpdSystem {
    a: SymMatrix,
    b: Vector,
    x_exact: Option<Vector>,
}

impl SpdSystem {
    /// Validates that `a` is SPD (Cholesky succeeds), dimensions agree, and
    /// any claimed exact solution satisfies `A·x_exact = b` to 1e-10
    /// relative.
    pub fn new(a: SymMatrix, b: Vector, x_exact: Option<Vector>) -> Result<Self> {
        check_dims("system", a.dim(), b.len())?;
        a.cholesky_lower()?;
        let sys = SpdSystem { a, b, x_exact: None };
        if let Some(x) = x_exact {
            check_dims("x_exact", sys.a.dim(), x.len())?;
            let resid = sys.residual_inf(&x)?;
            let scale = sys.b.inf_norm().max(1.0);
            if resid > EXACT_SOLUTION_RTOL * scale {
                return Err(Error::ExactSolutionMismatch {
                    residual: resid / scale,
                });
            }
            return Ok(SpdSystem {
                x_exact: Some(x),
                ..sys
            });
        }
        Ok(sys)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &SymMatrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn x_exact(&self) -> Option<&Vector> {
        self.x_exact.as_ref()
    }

    /// Π(x) = ½ xᵀA x − xᵀb. Its unique minimizer solves A x = b.
    pub fn potential_energy(&self, x: &Vector) -> Result<f64> {
        Ok(0.5 * self.a.quadratic_form(x)? - x.dot(&self.b)?)
    }

    /// max_i |(A x − b)_i|
    pub fn residual_inf(&self, x: &Vector) -> Result<f64> {
        let ax = self.a.mat_vec(x)?;
        ax.inf_distance(&self.b)
    }

    /// Parse the JSON system format:
    /// `{"d": n, "A": [[...], ...], "b": [...], "x_exact": [...]?}`
    /// with `A` row-major. Symmetry is validated at 1e-12 absolute.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SystemJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidSystem(e.to_string()))?;
        if file.a.len() != file.d {
            return Err(Error::InvalidSystem(format!(
                "declared d = {} but A has {} rows",
                file.d,
                file.a.len()
            )));
        }
        if file.b.len() != file.d {
            return Err(Error::InvalidSystem(format!(
                "declared d = {} but b has {} entries",
                file.d,
                file.b.len()
            )));
        }
        let a = SymMatrix::from_rows(&file.a)?;
        let b = Vector::new(file.b)?;
        let x_exact = file.x_exact.map(Vector::new).transpose()?;
        SpdSystem::new(a, b, x_exact)
    }

    /// Serialize to the JSON system format (see [`SpdSystem::from_json_str`]).
    pub fn to_json_str(&self) -> String {
        let file = SystemJson {
            d: self.dim(),
            a: self.a.to_rows(),
            b: self.b.as_slice().to_vec(),
            x_exact: self.x_exact.as_ref().map(|x| x.as_slice().to_vec()),
        };
        serde_json::to_string_pretty(&file).expect("system serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    d: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_exact: Option<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    #[test]
    fn vector_rejects_bad_input() {
        assert!(Vector::new(vec![]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn mat_vec_identity_and_scalar() {
        let id = SymMatrix::identity(2);
        let v = vec2(3.0, -1.0);
        assert_eq!(id.mat_vec(&v).unwrap(), v);

        let twice = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 0.0 });
        assert_eq!(twice.mat_vec(&vec2(1.0, 1.0)).unwrap(), vec2(2.0, 2.0));
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let id = SymMatrix::identity(3);
        assert!(matches!(
            id.mat_vec(&vec2(1.0, 2.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn potential_energy_matches_hand_values() {
        // x = 0 annihilates both terms for any system
        let sys = SpdSystem::new(SymMatrix::identity(2), vec2(0.5, -0.25), None).unwrap();
        assert_eq!(sys.potential_energy(&Vector::zeros(2)).unwrap(), 0.0);

        // A=[1], b=(1), x=(1): ½·1 − 1 = −0.5
        let sys = SpdSystem::new(
            SymMatrix::identity(1),
            Vector::new(vec![1.0]).unwrap(),
            None,
        )
        .unwrap();
        assert_relative_eq!(
            sys.potential_energy(&Vector::new(vec![1.0]).unwrap()).unwrap(),
            -0.5
        );

        // A=[1], b=(0), x=(−2): ½·4 − 0 = 2
        let sys = SpdSystem::new(
            SymMatrix::identity(1),
            Vector::new(vec![0.0]).unwrap(),
            None,
        )
        .unwrap();
        assert_relative_eq!(
            sys.potential_energy(&Vector::new(vec![-2.0]).unwrap()).unwrap(),
            2.0
        );
    }

    #[test]
    fn spd_check_identity_true_indefinite_false() {
        assert!(SymMatrix::identity(4).is_spd());
        // eigenvalues 3 and −1
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!m.is_spd());
    }

    #[test]
    fn residual_inf_hand_values() {
        let sys = SpdSystem::new(
            SymMatrix::identity(1),
            Vector::new(vec![1.0]).unwrap(),
            None,
        )
        .unwrap();
        assert_eq!(
            sys.residual_inf(&Vector::new(vec![0.0]).unwrap()).unwrap(),
            1.0
        );

        let a = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 0.0 });
        let sys = SpdSystem::new(a, vec2(2.0, 2.0), None).unwrap();
        assert_eq!(sys.residual_inf(&vec2(0.0, 1.0)).unwrap(), 2.0);
    }

    #[test]
    fn system_validates_exact_solution() {
        let a = SymMatrix::identity(2);
        let ok = SpdSystem::new(a.clone(), vec2(1.0, 2.0), Some(vec2(1.0, 2.0)));
        assert!(ok.is_ok());
        assert!(ok.unwrap().residual_inf(&vec2(1.0, 2.0)).unwrap() <= 1e-10);

        let bad = SpdSystem::new(a, vec2(1.0, 2.0), Some(vec2(1.0, 2.5)));
        assert!(matches!(bad, Err(Error::ExactSolutionMismatch { .. })));
    }

    #[test]
    fn system_rejects_non_spd_matrix() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            SpdSystem::new(m, vec2(0.0, 0.0), None),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_symmetry_validation() {
        let a = SymMatrix::from_rows(&[vec![2.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        let sys = SpdSystem::new(a, vec2(1.5, 1.0), None).unwrap();
        let text = sys.to_json_str();
        let back = SpdSystem::from_json_str(&text).unwrap();
        assert_eq!(back.a().to_rows(), sys.a().to_rows());
        assert_eq!(back.b(), sys.b());

        let asym = r#"{"d":2,"A":[[2.0,-0.5],[-0.4,2.0]],"b":[1.0,1.0]}"#;
        assert!(matches!(
            SpdSystem::from_json_str(asym),
            Err(Error::NotSymmetric { .. })
        ));

        let mangled = r#"{"d":2,"A":[[2.0,-0.5]"#;
        assert!(matches!(
            SpdSystem::from_json_str(mangled),
            Err(Error::InvalidSystem(_))
        ));

        let wrong_d = r#"{"d":3,"A":[[2.0,-0.5],[-0.5,2.0]],"b":[1.0,1.0]}"#;
        assert!(matches!(
            SpdSystem::from_json_str(wrong_d),
            Err(Error::InvalidSystem(_))
        ));
    }
}
