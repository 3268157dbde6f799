use std::fmt;
use std::sync::Arc;

use super::{Jet1, Jet2, Scalar};

/// A function of a point that can be evaluated in any [`Scalar`] kind.
pub trait FieldFn: Send + Sync {
    fn eval<S: Scalar>(&self, x: &[S]) -> S;
}

trait ErasedField: Send + Sync {
    fn real(&self, x: &[f64]) -> f64;
    fn jet1(&self, x: &[Jet1]) -> Jet1;
    fn jet2(&self, x: &[Jet2]) -> Jet2;
}

struct Erased<F>(F);

impl<F: FieldFn> ErasedField for Erased<F> {
    fn real(&self, x: &[f64]) -> f64 {
        self.0.eval(x)
    }
    fn jet1(&self, x: &[Jet1]) -> Jet1 {
        self.0.eval(x)
    }
    fn jet2(&self, x: &[Jet2]) -> Jet2 {
        self.0.eval(x)
    }
}

/// Type-erased scalar field on `R^dim`, cheap to clone.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    label: String,
    inner: Arc<dyn ErasedField>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish()
    }
}

impl ScalarField {
    pub fn new<F: FieldFn + 'static>(dim: usize, f: F) -> Self {
        ScalarField {
            dim,
            label: String::new(),
            inner: Arc::new(Erased(f)),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.inner.real(x)
    }

    pub fn eval_jet1(&self, x: &[Jet1]) -> Jet1 {
        self.inner.jet1(x)
    }

    pub fn eval_jet2(&self, x: &[Jet2]) -> Jet2 {
        self.inner.jet2(x)
    }

    /// `alpha * self`.
    pub fn scaled(&self, alpha: f64) -> ScalarField {
        ScalarField::new(
            self.dim,
            Scaled {
                alpha,
                field: self.clone(),
            },
        )
        .with_label(format!("{alpha}*({})", self.label))
    }

    /// `self + other`.
    pub fn plus(&self, other: &ScalarField) -> ScalarField {
        ScalarField::new(
            self.dim,
            Sum {
                a: self.clone(),
                b: other.clone(),
            },
        )
        .with_label(format!("({})+({})", self.label, other.label))
    }

    /// The degree-0 homogeneous extension `x ↦ f(x/|x|)`.
    pub fn radial_projection(&self) -> ScalarField {
        ScalarField::new(self.dim, Projected(self.clone()))
            .with_label(format!("({})∘(x/|x|)", self.label))
    }
}

struct Scaled {
    alpha: f64,
    field: ScalarField,
}

impl FieldFn for Scaled {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::eval_field(&self.field, x) * self.alpha
    }
}

struct Sum {
    a: ScalarField,
    b: ScalarField,
}

impl FieldFn for Sum {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        S::eval_field(&self.a, x) + S::eval_field(&self.b, x)
    }
}

struct Projected(ScalarField);

impl FieldFn for Projected {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let norm = x
            .iter()
            .fold(S::constant(0.0), |acc, &xi| acc + xi * xi)
            .sqrt();
        let inv = norm.recip();
        let y: Vec<S> = x.iter().map(|&xi| xi * inv).collect();
        S::eval_field(&self.0, &y)
    }
}
