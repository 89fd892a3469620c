use num_traits::Zero;
use orbifold_core::basis::efunction_basis_with;
use orbifold_core::qexp::check_duality;
use orbifold_core::series::efunction_series_with;
use orbifold_core::{AbelianSubgroup, Exec, InvertiblePolynomial, Q};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Shape {
    Fermat(u32),
    Chain(u32, u32),
    Loop(u32, u32),
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        (2u32..7).prop_map(Shape::Fermat),
        (2u32..5, 2u32..4).prop_map(|(a, b)| Shape::Chain(a, b)),
        (2u32..5, 2u32..4).prop_map(|(a, b)| Shape::Loop(a, b)),
    ]
}

fn render(shapes: &[Shape]) -> String {
    let mut v = 0;
    let mut next = || {
        v += 1;
        format!("x{v}")
    };
    let mut parts = Vec::new();
    for s in shapes {
        match *s {
            Shape::Fermat(a) => parts.push(format!("{}^{a}", next())),
            Shape::Chain(a, b) => {
                let (x, y) = (next(), next());
                parts.push(format!("{x}^{a}*{y}"));
                parts.push(format!("{y}^{b}"));
            }
            Shape::Loop(a, b) => {
                let (x, y) = (next(), next());
                parts.push(format!("{x}^{a}*{y}"));
                parts.push(format!("{y}^{b}*{x}"));
            }
        }
    }
    parts.join(" + ")
}

fn polynomial() -> impl Strategy<Value = InvertiblePolynomial> {
    prop::collection::vec(shape(), 1..3)
        .prop_filter("at most three variables", |s| {
            s.iter()
                .map(|x| if matches!(x, Shape::Fermat(_)) { 1 } else { 2 })
                .sum::<usize>()
                <= 3
        })
        .prop_map(|s| {
            render(&s)
                .parse()
                .expect("generated polynomial is invertible")
        })
}

/// A polynomial together with the cyclic subgroup generated by one element of `G_f`.
fn pair() -> impl Strategy<Value = AbelianSubgroup> {
    (polynomial(), any::<prop::sample::Index>()).prop_map(|(f, ix)| {
        let gf = AbelianSubgroup::maximal(&f);
        let g = ix.get(gf.elements()).clone();
        AbelianSubgroup::generated(&f, vec![g]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn display_round_trips(f in polynomial()) {
        let back: InvertiblePolynomial = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn weights_are_positive_and_quasihomogeneous(f in polynomial()) {
        let e = f.exponent_matrix();
        for i in 0..f.n() {
            let deg: Q = (0..f.n()).map(|j| f.q()[j] * e.get(i, j)).sum();
            prop_assert_eq!(deg, Q::from_integer(1));
            prop_assert!(f.q()[i] > Q::zero() && f.q()[i] <= Q::new(1, 2));
        }
    }

    #[test]
    fn age_of_inverse(f in polynomial(), ix in any::<prop::sample::Index>()) {
        let gf = AbelianSubgroup::maximal(&f);
        let g = ix.get(gf.elements());
        let total = g.age() + g.neg().age();
        prop_assert_eq!(total, Q::from_integer((f.n() - g.n_fixed()) as i64));
    }

    #[test]
    fn transpose_is_an_involution(f in polynomial()) {
        prop_assert_eq!(f.transpose().transpose(), f.clone());
        prop_assert_eq!(f.transpose().det(), f.det());
        prop_assert_eq!(AbelianSubgroup::maximal(&f).order() as i64, f.det());
    }

    #[test]
    fn dual_orders_multiply_to_det(g in pair()) {
        let d = g.dual();
        prop_assert_eq!((g.order() * d.order()) as i64, g.ambient().det());
        prop_assert_eq!(d.dual(), g);
    }

    #[test]
    fn engines_agree_and_duality_holds(g in pair()) {
        let n = g.ambient().n();
        let e = efunction_basis_with(&g, Exec::Sequential).unwrap();
        prop_assert_eq!(&e, &efunction_series_with(&g, Exec::Parallel).unwrap());
        let d = efunction_basis_with(&g.dual(), Exec::Sequential).unwrap();
        prop_assert!(check_duality(&e, &d, n), "E = {}, dual E = {}", e.pretty(), d.pretty());
    }
}
