use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::presentation::{evaluate, GroupPresentation, Word};
use crate::error::{Error, Result};
use crate::kostant::ModuleFamily;
use crate::symmetric::TraceFreePower;
use crate::tractor_numerics::klein::{lorentz_diag, lorentz_form};

/// Coefficient module for a representation factoring through `SO(n,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Trivial,
    Defining,
    /// `S^k_0 ℝ^{n+1}`.
    TraceFree(usize),
}

impl Coefficients {
    pub fn from_family(family: ModuleFamily) -> Result<Self> {
        match family {
            ModuleFamily::Trivial | ModuleFamily::SymK(0) | ModuleFamily::SymKDual(0) => Ok(Coefficients::Trivial),
            ModuleFamily::Defining | ModuleFamily::Dual => Ok(Coefficients::Defining),
            ModuleFamily::SymK(k) | ModuleFamily::SymKDual(k) => Ok(Coefficients::TraceFree(k)),
            ModuleFamily::Adjoint => {
                Err(Error::UnsupportedFamily("adjoint coefficients branch into several summands; choose one".into()))
            }
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        match *self {
            Coefficients::Trivial => 1,
            Coefficients::Defining => n + 1,
            Coefficients::TraceFree(k) => crate::vz_branching::trace_free_dimension(n + 1, k),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Trivial => write!(f, "trivial"),
            Coefficients::Defining => write!(f, "defining"),
            Coefficients::TraceFree(k) => write!(f, "symk:{k}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Coefficients::from_family(s.parse()?)
    }
}

/// Generator matrices of a surface group acting on a coefficient module,
/// together with the underlying `SO(n,1)` matrices that move the chart.
#[derive(Debug, Clone)]
pub struct FlatRepresentation {
    pub presentation: GroupPresentation,
    pub coefficients: Coefficients,
    pub geometric: Vec<DMatrix<f64>>,
    pub geometric_inverses: Vec<DMatrix<f64>>,
    pub matrices: Vec<DMatrix<f64>>,
    pub inverses: Vec<DMatrix<f64>>,
    /// Invariant bilinear form on the coefficient module.
    pub form: DMatrix<f64>,
    action: CoefficientMap,
}

/// How an `SO(n,1)` matrix acts on the coefficient module. Words are
/// multiplied out in `SO(n,1)` before this is applied, which keeps rounding
/// at the level of the geometric matrices.
#[derive(Debug, Clone)]
enum CoefficientMap {
    Trivial,
    Defining,
    TraceFree(Box<TraceFreePower>),
}

impl CoefficientMap {
    fn apply(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            CoefficientMap::Trivial => DMatrix::identity(1, 1),
            CoefficientMap::Defining => g.clone(),
            CoefficientMap::TraceFree(t) => t.group(g),
        }
    }
}

/// `A^{-1} = H Aᵀ H` for `A ∈ O(n,1)`.
pub fn lorentz_inverse(a: &DMatrix<f64>) -> DMatrix<f64> {
    let h = lorentz_form(a.nrows() - 1);
    &h * a.transpose() * &h
}

impl FlatRepresentation {
    /// Defining representation from `SO(n,1)` generator matrices.
    pub fn defining(presentation: GroupPresentation, geometric: Vec<DMatrix<f64>>) -> Result<Self> {
        if geometric.len() != presentation.generators {
            return Err(Error::Dimension(format!(
                "{} matrices for {} generators",
                geometric.len(),
                presentation.generators
            )));
        }
        let geometric_inverses: Vec<DMatrix<f64>> = geometric.iter().map(lorentz_inverse).collect();
        let n = geometric[0].nrows() - 1;
        Ok(Self {
            presentation,
            coefficients: Coefficients::Defining,
            matrices: geometric.clone(),
            inverses: geometric_inverses.clone(),
            geometric,
            geometric_inverses,
            form: lorentz_form(n),
            action: CoefficientMap::Defining,
        })
    }

    pub fn n(&self) -> usize {
        self.geometric[0].nrows() - 1
    }

    pub fn coefficient_dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generators
    }

    pub fn eval(&self, w: &Word) -> DMatrix<f64> {
        self.action.apply(&self.eval_geometric(w))
    }

    /// Product of the coefficient matrices letter by letter.
    pub fn eval_product(&self, w: &Word) -> DMatrix<f64> {
        evaluate(w, &self.matrices, &self.inverses)
    }

    pub fn eval_geometric(&self, w: &Word) -> DMatrix<f64> {
        evaluate(w, &self.geometric, &self.geometric_inverses)
    }

    /// `max |ρ(R) - I|`.
    pub fn relator_residual(&self) -> f64 {
        let d = self.coefficient_dim();
        (self.eval(&self.presentation.relator) - DMatrix::identity(d, d)).amax()
    }

    /// `max_i |ρ(x_i)ᵀ B ρ(x_i) - B| / (|ρ(x_i)|² |B|)` with max-entry norms.
    /// Entries of `ρ(x_i)` grow like the `k`-th power of the geometric ones,
    /// so only the relative size of the defect is meaningful.
    pub fn form_residual(&self) -> f64 {
        let b = self.form.amax();
        self.matrices
            .iter()
            .map(|m| (m.transpose() * &self.form * m - &self.form).amax() / (m.amax().powi(2) * b))
            .fold(0.0, f64::max)
    }

    /// Conjugate every matrix by `a ∈ SO(n,1)`.
    pub fn conjugate(&self, a: &DMatrix<f64>) -> Result<Self> {
        let ai = lorentz_inverse(a);
        let geometric = self.geometric.iter().map(|g| a * g * &ai).collect();
        let base = Self::defining(self.presentation.clone(), geometric)?;
        coefficient_action(&base, self.coefficients)
    }
}

/// The representation induced on another coefficient module.
pub fn coefficient_action(rep: &FlatRepresentation, coefficients: Coefficients) -> Result<FlatRepresentation> {
    let n = rep.n();
    let (action, form) = match coefficients {
        Coefficients::Trivial => (CoefficientMap::Trivial, DMatrix::identity(1, 1)),
        Coefficients::Defining => (CoefficientMap::Defining, lorentz_form(n)),
        Coefficients::TraceFree(k) => {
            let t = TraceFreePower::new(&lorentz_diag(n), k)?;
            let form = t.form();
            (CoefficientMap::TraceFree(Box::new(t)), form)
        }
    };
    let matrices = rep.geometric.iter().map(|g| action.apply(g)).collect();
    let inverses = rep.geometric_inverses.iter().map(|g| action.apply(g)).collect();
    Ok(FlatRepresentation {
        presentation: rep.presentation.clone(),
        coefficients,
        geometric: rep.geometric.clone(),
        geometric_inverses: rep.geometric_inverses.clone(),
        matrices,
        inverses,
        form,
        action,
    })
}
