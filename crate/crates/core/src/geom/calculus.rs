use super::{sort_sign, Alt, Form, GeomError, MultiVec, Variance};
use crate::expr::Expr;

/// Contracts `small` into the leading slots of `big`:
/// `(i_s b)_J = Σ_I s_I · b_{I∪J}` with the shuffle sign of `(I, J)`.
fn contract_leading<A: Variance, B: Variance>(
    small: &Alt<A>,
    big: &Alt<B>,
) -> Result<Alt<B>, GeomError> {
    if small.dim() != big.dim() {
        return Err(GeomError::DimensionMismatch(small.dim(), big.dim()));
    }
    if small.degree() > big.degree() {
        return Err(GeomError::DegreeMismatch(format!(
            "cannot contract degree {} into degree {}",
            small.degree(),
            big.degree()
        )));
    }
    let mut out = Alt::zero(big.dim(), big.degree() - small.degree());
    for (i, s) in small.iter() {
        for (k, b) in big.iter() {
            if !i.iter().all(|x| k.contains(x)) {
                continue;
            }
            let j: Vec<usize> = k.iter().copied().filter(|x| !i.contains(x)).collect();
            let mut cat: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
            let sign = sort_sign(&mut cat).expect("disjoint tuples");
            let prod = s * b;
            out.add_at(&j, if sign > 0 { prod } else { -prod });
        }
    }
    Ok(out)
}

/// Interior product `i_v f`, filling the leading slots of `f`. Pairing is
/// normalized so that `i_{∂1∧∂3}(dz1∧dz3) = 1`.
pub fn interior(v: &MultiVec, f: &Form) -> Result<Form, GeomError> {
    contract_leading(v, f)
}

/// Contraction of a form into the leading slots of a multivector; for a
/// bivector `P` and a one-form `u` this is `P(u)^b = Σ_a u_a P^{ab}`.
pub fn contract(u: &Form, p: &MultiVec) -> Result<MultiVec, GeomError> {
    contract_leading(u, p)
}

/// `X(f) = Σ_a X^a ∂_a f`.
pub fn apply_vector(x: &MultiVec, f: &Expr) -> Expr {
    assert_eq!(x.degree(), 1);
    x.iter().map(|(i, xa)| xa * &f.d(i[0])).sum()
}

pub fn exterior_derivative(f: &Form) -> Result<Form, GeomError> {
    let degree = f.degree() + 1;
    if degree > f.dim() {
        return Err(GeomError::DegreeOverflow {
            degree,
            dim: f.dim(),
        });
    }
    let mut out = Form::zero(f.dim(), degree);
    for (idx, e) in f.iter() {
        for a in 0..f.dim() {
            if idx.contains(&a) {
                continue;
            }
            let de = e.d(a);
            if de.is_zero() {
                continue;
            }
            let mut k = Vec::with_capacity(degree);
            k.push(a);
            k.extend_from_slice(idx);
            out.add_at(&k, de);
        }
    }
    Ok(out)
}

/// Right derivative by the odd variable dual to `∂_a`.
fn odd_derivative(p: &MultiVec, a: usize) -> MultiVec {
    let deg = p.degree();
    let mut out = MultiVec::zero(p.dim(), deg - 1);
    for (idx, e) in p.iter() {
        if let Some(pos) = idx.iter().position(|&i| i == a) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&i| i != a).collect();
            out.add_at(
                &rest,
                if (deg - 1 - pos).is_multiple_of(2) {
                    e.clone()
                } else {
                    -e
                },
            );
        }
    }
    out
}

/// Schouten bracket of multivector fields.
///
/// `[P, Q] = Σ_a (P ∂⃖/∂θ_a) ∧ ∂_a Q − (−1)^{(p−1)(q−1)} (Q ∂⃖/∂θ_a) ∧ ∂_a P`,
/// which gives `[X, f] = X(f)`, the commutator on vector fields and
/// `[X, V] = L_X V`.
pub fn schouten(p: &MultiVec, q: &MultiVec) -> Result<MultiVec, GeomError> {
    if p.dim() != q.dim() {
        return Err(GeomError::DimensionMismatch(p.dim(), q.dim()));
    }
    let (dp, dq, dim) = (p.degree(), q.degree(), p.dim());
    if dp + dq == 0 {
        return Err(GeomError::DegreeMismatch("bracket of two functions".into()));
    }
    let degree = dp + dq - 1;
    if degree > dim {
        return Err(GeomError::DegreeOverflow { degree, dim });
    }
    let flip = ((dp as i64 - 1) * (dq as i64 - 1)).rem_euclid(2) == 1;
    let mut out = MultiVec::zero(dim, degree);
    for a in 0..dim {
        if dp > 0 {
            let l = odd_derivative(p, a);
            if !l.is_zero() {
                out = &out + &l.wedge(&q.diff(crate::expr::Var::Coord(a)))?;
            }
        }
        if dq > 0 {
            let l = odd_derivative(q, a);
            if !l.is_zero() {
                let term = l.wedge(&p.diff(crate::expr::Var::Coord(a)))?;
                out = if flip { &out + &term } else { &out - &term };
            }
        }
    }
    Ok(out)
}

/// `L_X f` on forms, by Cartan's formula `i_X d + d i_X`.
pub fn lie_derivative(x: &MultiVec, f: &Form) -> Result<Form, GeomError> {
    if x.degree() != 1 {
        return Err(GeomError::DegreeMismatch(
            "Lie derivative along a non-vector".into(),
        ));
    }
    if f.degree() == 0 {
        return Ok(Form::scalar(f.dim(), apply_vector(x, &f.coefficient())));
    }
    let mut out = exterior_derivative(&interior(x, f)?)?;
    if f.degree() < f.dim() {
        out = &out + &interior(x, &exterior_derivative(f)?)?;
    }
    Ok(out)
}

/// `L_X V = [X, V]` on multivectors.
pub fn lie_derivative_multivec(x: &MultiVec, v: &MultiVec) -> Result<MultiVec, GeomError> {
    if x.degree() != 1 {
        return Err(GeomError::DegreeMismatch(
            "Lie derivative along a non-vector".into(),
        ));
    }
    schouten(x, v)
}
