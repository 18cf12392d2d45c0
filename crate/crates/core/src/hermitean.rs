//! Complex structure, Witt basis and Hermitean variables.

use num_complex::Complex64;

use crate::clifford::{embed_vector, Multivector, VectorR2n, MAX_DIM};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `J[e_j] = -e_{n+j}`, `J[e_{n+j}] = e_j`, i.e. `(x, y) -> (y, -x)`.
pub fn apply_j_vector(x: &VectorR2n) -> VectorR2n {
    let n = x.n();
    let c = x.components();
    let mut out = Vec::with_capacity(2 * n);
    out.extend_from_slice(&c[n..]);
    out.extend(c[..n].iter().map(|v| -v));
    VectorR2n::new(out).expect("rotation preserves length")
}

/// `Z = ½(X + iX|)` and `Z† = -½(X - iX|)`.
pub fn hermitean_vars(x: &VectorR2n) -> (Multivector, Multivector) {
    let ex = embed_vector(x);
    let exj = embed_vector(&apply_j_vector(x));
    let z = (&ex + &exj.scale(I)).scale_real(0.5);
    let zdag = (&ex - &exj.scale(I)).scale_real(-0.5);
    (z, zdag)
}

/// The Witt basis `f_j = ½(e_j - i e_{n+j})`, `f_j† = -½(e_j + i e_{n+j})`.
#[derive(Clone, Debug)]
pub struct WittBasis {
    n: usize,
    f: Vec<Multivector>,
    f_dag: Vec<Multivector>,
}

impl WittBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || 2 * n > MAX_DIM {
            return Err(Error::Parameter(format!("half-dimension n = {n} outside 1..={}", MAX_DIM / 2)));
        }
        let dim = 2 * n;
        let mut f = Vec::with_capacity(n);
        let mut f_dag = Vec::with_capacity(n);
        for j in 1..=n {
            let ej = Multivector::generator(dim, j);
            let enj = Multivector::generator(dim, n + j);
            f.push((&ej - &enj.scale(I)).scale_real(0.5));
            f_dag.push((&ej + &enj.scale(I)).scale_real(-0.5));
        }
        Ok(WittBasis { n, f, f_dag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `f_j`, 1-based.
    pub fn f(&self, j: usize) -> &Multivector {
        &self.f[j - 1]
    }

    /// `f_j†`, 1-based.
    pub fn f_dag(&self, j: usize) -> &Multivector {
        &self.f_dag[j - 1]
    }

    /// The idempotent `I_j = f_j f_j†`.
    pub fn idempotent(&self, j: usize) -> Multivector {
        self.f(j) * self.f_dag(j)
    }

    /// `Z = Σ f_j z_j` with `z_j = x_j + i y_j`.
    pub fn z_from_coordinates(&self, x: &VectorR2n) -> Multivector {
        let mut z = Multivector::zero(2 * self.n);
        for j in 0..self.n {
            z += &self.f[j].scale(Complex64::new(x.x(j), x.y(j)));
        }
        z
    }

    /// `Z† = Σ f_j† z_j^c`.
    pub fn zdag_from_coordinates(&self, x: &VectorR2n) -> Multivector {
        let mut z = Multivector::zero(2 * self.n);
        for j in 0..self.n {
            z += &self.f_dag[j].scale(Complex64::new(x.x(j), -x.y(j)));
        }
        z
    }
}

pub fn witt_basis(n: usize) -> Result<WittBasis> {
    WittBasis::new(n)
}
