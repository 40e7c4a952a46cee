//! Curvature, its normal derivatives, the elastic gradient, energy and length,
//! all written directly in terms of the parameter derivatives of the curve.

use alloc::vec::Vec;

use crate::curve::{
    check_gamma, deriv, dot, project_with_tangent, quad_with_gamma, DiscreteCurve, ScalarField,
    VectorField, DEFAULT_GAMMA_MIN,
};
use crate::error::Result;

/// Parameter derivatives `f', f'', f''', f''''` and the arc element at every node.
#[derive(Debug, Clone)]
pub struct Jet {
    pub d1: VectorField,
    pub d2: VectorField,
    pub d3: VectorField,
    pub d4: VectorField,
    pub gamma: ScalarField,
    pub h: f64,
}

impl Jet {
    pub fn new(curve: &DiscreteCurve) -> Result<Self> {
        Self::with_gamma_min(curve, DEFAULT_GAMMA_MIN)
    }

    pub fn with_gamma_min(curve: &DiscreteCurve, gamma_min: f64) -> Result<Self> {
        let d1 = deriv(curve, 1)?;
        let gamma = d1.norms();
        check_gamma(&gamma, gamma_min)?;
        Ok(Jet {
            d2: deriv(curve, 2)?,
            d3: deriv(curve, 3)?,
            d4: deriv(curve, 4)?,
            d1,
            gamma,
            h: curve.h(),
        })
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.d1.dim
    }

    /// Unit tangent `f' / gamma`.
    pub fn tangent(&self) -> VectorField {
        let mut t = self.d1.clone();
        for (i, g) in self.gamma.iter().enumerate() {
            t.at_mut(i).iter_mut().for_each(|v| *v /= g);
        }
        t
    }

    /// `int g ds`.
    pub fn quad(&self, g: &[f64]) -> f64 {
        quad_with_gamma(g, &self.gamma, self.h)
    }

    fn map_nodes(&self, mut f: impl FnMut(&Local, &mut [f64])) -> VectorField {
        let mut out = VectorField::zeros(self.len(), self.dim());
        for i in 0..self.len() {
            let local = Local::at(self, i);
            f(&local, out.at_mut(i));
        }
        out
    }

    fn map_scalars(&self, f: impl Fn(&Local) -> f64) -> ScalarField {
        (0..self.len()).map(|i| f(&Local::at(self, i))).collect()
    }
}

/// Inner products of the derivatives at one node.
struct Local<'a> {
    a: &'a [f64],
    b: &'a [f64],
    c: &'a [f64],
    e: &'a [f64],
    g: f64,
    /// <f'', f'>
    ba: f64,
    /// |f''|^2
    bb: f64,
    /// <f''', f'>
    ca: f64,
    /// <f''', f''>
    cb: f64,
    /// |f'''|^2
    cc: f64,
}

impl<'a> Local<'a> {
    fn at(jet: &'a Jet, i: usize) -> Self {
        let a = jet.d1.at(i);
        let b = jet.d2.at(i);
        let c = jet.d3.at(i);
        Local {
            a,
            b,
            c,
            e: jet.d4.at(i),
            g: jet.gamma[i],
            ba: dot(b, a),
            bb: dot(b, b),
            ca: dot(c, a),
            cb: dot(c, b),
            cc: dot(c, c),
        }
    }
}

fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

/// Curvature vector `f''/g^2 - <f'', f'> f' / g^4`.
pub fn curvature_from(jet: &Jet) -> VectorField {
    jet.map_nodes(|l, out| {
        let g2 = l.g * l.g;
        let g4 = g2 * g2;
        for k in 0..out.len() {
            out[k] = l.b[k] / g2 - l.ba / g4 * l.a[k];
        }
    })
}

/// Normal derivative of the curvature, four-term expansion.
pub fn nabla_s_kappa_from(jet: &Jet) -> VectorField {
    jet.map_nodes(|l, out| {
        let g3 = powi(l.g, 3);
        let g5 = powi(l.g, 5);
        let g7 = powi(l.g, 7);
        for k in 0..out.len() {
            out[k] = l.c[k] / g3 - l.ca / g5 * l.a[k] - 3.0 * l.ba / g5 * l.b[k]
                + 3.0 * l.ba * l.ba / g7 * l.a[k];
        }
    })
}

/// Shared bracket of the fourth-order expressions:
/// `f''''/g^4 - 6 <f'',f'> f'''/g^6 - 4 <f''',f'> f''/g^6 - cb |f''|^2 f''/g^6 + cc <f'',f'>^2 f''/g^8`.
fn fourth_order_bracket(jet: &Jet, coef_bb: f64, coef_ba2: f64) -> VectorField {
    jet.map_nodes(|l, out| {
        let g4 = powi(l.g, 4);
        let g6 = powi(l.g, 6);
        let g8 = g4 * g4;
        let s_b = -4.0 * l.ca / g6 - coef_bb * l.bb / g6 + coef_ba2 * l.ba * l.ba / g8;
        let s_c = -6.0 * l.ba / g6;
        for k in 0..out.len() {
            out[k] = l.e[k] / g4 + s_c * l.c[k] + s_b * l.b[k];
        }
    })
}

/// Second normal derivative of the curvature (projected five-term bracket).
pub fn nabla_s2_kappa_from(jet: &Jet) -> VectorField {
    project_with_tangent(&fourth_order_bracket(jet, 3.0, 18.0), &jet.tangent())
}

/// Unprojected operator `A(f) = f''''/g^4 + F(g^-1, f', f'', f''')`.
pub fn a_of_f_from(jet: &Jet) -> VectorField {
    fourth_order_bracket(jet, 2.5, 17.5)
}

/// Elastic gradient as the normal part of `A(f)`.
pub fn elastic_gradient_from(jet: &Jet) -> VectorField {
    project_with_tangent(&a_of_f_from(jet), &jet.tangent())
}

/// Elastic gradient assembled as `nabla_s^2 kappa + |kappa|^2 kappa / 2`.
pub fn elastic_gradient_split_from(jet: &Jet) -> VectorField {
    let kappa = curvature_from(jet);
    let mut out = nabla_s2_kappa_from(jet);
    for i in 0..out.len() {
        let k = kappa.at(i);
        let half_k2 = 0.5 * dot(k, k);
        for (o, kc) in out.at_mut(i).iter_mut().zip(k) {
            *o += half_k2 * kc;
        }
    }
    out
}

/// `|kappa|^4`, `|nabla_s kappa|^2` and `<nabla_s kappa, kappa>` from the raw derivatives.
pub fn lambda_densities_from(jet: &Jet) -> (ScalarField, ScalarField, ScalarField) {
    let k4 = jet.map_scalars(|l| {
        let g = l.g;
        l.bb * l.bb / powi(g, 8) - 2.0 * l.bb * l.ba * l.ba / powi(g, 10)
            + powi(l.ba, 4) / powi(g, 12)
    });
    let nk2 = jet.map_scalars(|l| {
        let g = l.g;
        l.cc / powi(g, 6) - l.ca * l.ca / powi(g, 8) - 6.0 * l.cb * l.ba / powi(g, 8)
            + 6.0 * l.ca * l.ba * l.ba / powi(g, 10)
            + 9.0 * l.ba * l.ba * l.bb / powi(g, 10)
            - 9.0 * powi(l.ba, 4) / powi(g, 12)
    });
    let nkk = jet.map_scalars(|l| {
        let g = l.g;
        l.cb / powi(g, 5) - l.ca * l.ba / powi(g, 7) - 3.0 * l.ba * l.bb / powi(g, 7)
            + 3.0 * powi(l.ba, 3) / powi(g, 9)
    });
    (k4, nk2, nkk)
}

/// `E(f) = 1/2 int |kappa|^2 ds`.
pub fn energy_from(jet: &Jet, kappa: &VectorField) -> f64 {
    0.5 * jet.quad(&kappa.dots(kappa))
}

/// `L(f) = int ds`.
pub fn length_from(jet: &Jet) -> f64 {
    let ones: Vec<f64> = alloc::vec![1.0; jet.len()];
    jet.quad(&ones)
}

pub fn curvature(curve: &DiscreteCurve) -> Result<VectorField> {
    Ok(curvature_from(&Jet::new(curve)?))
}

pub fn nabla_s_kappa(curve: &DiscreteCurve) -> Result<VectorField> {
    Ok(nabla_s_kappa_from(&Jet::new(curve)?))
}

pub fn nabla_s2_kappa(curve: &DiscreteCurve) -> Result<VectorField> {
    Ok(nabla_s2_kappa_from(&Jet::new(curve)?))
}

pub fn a_of_f(curve: &DiscreteCurve) -> Result<VectorField> {
    Ok(a_of_f_from(&Jet::new(curve)?))
}

/// L2(ds) gradient of the elastic energy.
pub fn elastic_gradient(curve: &DiscreteCurve) -> Result<VectorField> {
    Ok(elastic_gradient_from(&Jet::new(curve)?))
}

pub fn energy(curve: &DiscreteCurve) -> Result<f64> {
    let jet = Jet::new(curve)?;
    Ok(energy_from(&jet, &curvature_from(&jet)))
}

pub fn length(curve: &DiscreteCurve) -> Result<f64> {
    Ok(length_from(&Jet::new(curve)?))
}

pub fn lambda_densities(curve: &DiscreteCurve) -> Result<(ScalarField, ScalarField, ScalarField)> {
    Ok(lambda_densities_from(&Jet::new(curve)?))
}

/// Every geometric quantity of a curve, evaluated once.
#[derive(Debug, Clone)]
pub struct GeometricFields {
    pub jet: Jet,
    pub gamma: ScalarField,
    pub tangent: VectorField,
    pub kappa: VectorField,
    pub nabla_s_kappa: VectorField,
    pub nabla_s2_kappa: VectorField,
    pub a_of_f: VectorField,
    pub grad_e: VectorField,
    pub energy: f64,
    pub length: f64,
}

impl GeometricFields {
    pub fn compute(curve: &DiscreteCurve) -> Result<Self> {
        Self::compute_with(curve, DEFAULT_GAMMA_MIN)
    }

    pub fn compute_with(curve: &DiscreteCurve, gamma_min: f64) -> Result<Self> {
        let jet = Jet::with_gamma_min(curve, gamma_min)?;
        let tangent = jet.tangent();
        let kappa = curvature_from(&jet);
        let a = a_of_f_from(&jet);
        let grad_e = project_with_tangent(&a, &tangent);
        let energy = energy_from(&jet, &kappa);
        let length = length_from(&jet);
        Ok(GeometricFields {
            gamma: jet.gamma.clone(),
            nabla_s_kappa: nabla_s_kappa_from(&jet),
            nabla_s2_kappa: nabla_s2_kappa_from(&jet),
            tangent,
            kappa,
            a_of_f: a,
            grad_e,
            energy,
            length,
            jet,
        })
    }

    /// `int g ds` on this curve.
    pub fn quad(&self, g: &[f64]) -> f64 {
        self.jet.quad(g)
    }

    /// Tangential speed `mu = -<A(f), df/ds>`.
    pub fn mu(&self) -> ScalarField {
        self.a_of_f
            .dots(&self.tangent)
            .into_iter()
            .map(|v| -v)
            .collect()
    }
}
