//! Closed-form vertex functions: digit sum `f1`, weighted digit sum `f2`,
//! the Hodge potential of `A`, and the split of `div(grad f2)` into its
//! positive-edge and negative-edge parts.

use crate::error::Result;
use crate::graph::ShapeGraph;
use crate::scalar::Scalar;

use super::Potential;

#[derive(Clone, Debug, PartialEq)]
pub struct BasePotentials<T> {
    /// `f1(a) = sum_i a_i`
    pub f1: Potential<T>,
    /// `f2(a) = 1/2 sum_i a_i (1 + K - 2i)`
    pub f2: Potential<T>,
    /// `f = -(f1 / 2 + f2 / (K + 2)) + K / 2`
    pub f: Potential<T>,
}

pub fn base_potentials<T: Scalar>(k: u32) -> BasePotentials<T> {
    let kk = k as i64;
    let f1 = Potential::from_fn(k, |a| T::from_int((0..a.len()).map(|i| a.entry(i) as i64).sum()));
    let f2 = Potential::from_fn(k, |a| {
        let twice: i64 = (0..a.len()).map(|i| a.entry(i) as i64 * (1 + kk - 2 * (i as i64 + 1))).sum();
        T::from_ratio(twice, 2)
    });
    let half = T::from_ratio(1, 2);
    let inv = T::from_ratio(1, kk + 2);
    let offset = T::from_ratio(kk, 2);
    let f = Potential::from_fn(k, |a| {
        offset.clone() - (half.clone() * f1.get(a).clone() + inv.clone() * f2.get(a).clone())
    });
    BasePotentials { f1, f2, f }
}

/// `F_i = (3 + 2(K - i)) / (K + 2)` for `i = 1..=K`.
pub fn closed_form_increments<T: Scalar>(k: u32) -> Vec<T> {
    let kk = k as i64;
    (1..=kk).map(|i| T::from_ratio(3 + 2 * (kk - i), kk + 2)).collect()
}

/// `f(a) = sum of F_i over the positions where a_i = -1`.
pub fn closed_form_potential<T: Scalar>(k: u32) -> Potential<T> {
    let increments = closed_form_increments::<T>(k);
    Potential::from_fn(k, |a| {
        (0..a.len()).filter(|&i| a.entry(i) < 0).fold(T::zero(), |acc, i| acc + increments[i].clone())
    })
}

/// `(phi, phi_bar)`: sums of `f2(b) - f2(a)` over positive, respectively
/// negative, edges `(a, b)`, by direct edge summation.
pub fn phi_profiles<T: Scalar>(g: &ShapeGraph) -> (Potential<T>, Potential<T>) {
    let f2 = base_potentials::<T>(g.order()).f2;
    let sum_with_sign = |sign: i8| {
        Potential::from_fn(g.order(), |a| {
            g.moves_from(a)
                .filter(|m| m.a_value == sign)
                .fold(T::zero(), |acc, m| acc + f2.get(m.head).clone() - f2.get(a).clone())
        })
    };
    (sum_with_sign(1), sum_with_sign(-1))
}

/// `(phi, phi_bar)` from degree profiles:
/// `phi = abar_ev - (K+1) a_ev + a_od + abar_od` and
/// `phi_bar = -a_ev + (K+1) abar_ev - abar_od - a_od`.
pub fn phi_closed_forms<T: Scalar>(g: &ShapeGraph) -> Result<(Potential<T>, Potential<T>)> {
    let k1 = g.order() as i64 + 1;
    let mut phi = Vec::with_capacity(g.vertex_count());
    let mut phi_bar = Vec::with_capacity(g.vertex_count());
    for bits in 0..g.vertex_count() as u32 {
        let a = crate::shape::Shape::from_bits(bits, g.order() as usize);
        let p = g.degree_profile(a)?;
        let (ae, ao) = (p.alpha_even() as i64, p.alpha_odd() as i64);
        let (be, bo) = (p.alpha_bar_even() as i64, p.alpha_bar_odd() as i64);
        phi.push(be - k1 * ae + ao + bo);
        phi_bar.push(-ae + k1 * be - bo - ao);
    }
    Ok((
        Potential::from_fn(g.order(), |a| T::from_int(phi[a.bits() as usize])),
        Potential::from_fn(g.order(), |a| T::from_int(phi_bar[a.bits() as usize])),
    ))
}

#[cfg(test)]
mod tests {
    use num::BigRational;

    use super::*;
    use crate::graph::build_graph;
    use crate::scalar::ratio;
    use crate::shape::Shape;

    fn s(v: &[i64]) -> Shape {
        Shape::from_signs(v.iter().copied()).unwrap()
    }

    #[test]
    fn k2_values() {
        let p = base_potentials::<BigRational>(2);
        assert_eq!(*p.f1.get(s(&[1, 1])), ratio(2, 1));
        assert_eq!(*p.f2.get(s(&[1, 1])), ratio(0, 1));
        assert_eq!(*p.f.get(s(&[1, 1])), ratio(0, 1));
        assert_eq!(closed_form_increments::<BigRational>(2), vec![ratio(5, 4), ratio(3, 4)]);
        assert_eq!(*closed_form_potential::<BigRational>(2).get(s(&[-1, -1])), ratio(2, 1));
        assert_eq!(closed_form_increments::<BigRational>(1), vec![ratio(1, 1)]);
    }

    #[test]
    fn base_f_is_closed_form() {
        for k in 1..=8 {
            assert_eq!(base_potentials::<BigRational>(k).f, closed_form_potential(k));
        }
    }

    #[test]
    fn increments_sum_to_k() {
        for k in 1..=12u32 {
            let total = closed_form_increments::<BigRational>(k).into_iter().fold(ratio(0, 1), |a, b| a + b);
            assert_eq!(total, ratio(k as i64, 1));
        }
    }

    #[test]
    fn phi_at_all_ones_k2() {
        let g = build_graph(2).unwrap();
        let (phi, _) = phi_profiles::<BigRational>(&g);
        assert_eq!(*phi.get(s(&[1, 1])), ratio(0, 1));
        let (closed, _) = phi_closed_forms::<BigRational>(&g).unwrap();
        assert_eq!(*closed.get(s(&[1, 1])), ratio(0, 1));
    }

    #[test]
    fn phi_mirror_symmetry() {
        for k in 1..=6 {
            let g = build_graph(k).unwrap();
            let (phi, phi_bar) = phi_profiles::<BigRational>(&g);
            let ones = Shape::all_ones(k as usize);
            assert_eq!(*phi.get(ones), -phi_bar.get(ones.negated()).clone());
        }
    }
}
