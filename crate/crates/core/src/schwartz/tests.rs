use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::padic::{CycloElement, CyclotomicField};
use crate::rational::{p_pow_q, q, qi, ValuationQ, Q};

type F = Arc<CyclotomicField<i128>>;

fn field(p: u64, n: u32) -> F {
    CyclotomicField::new(p, n, 12).unwrap()
}

fn ind(f: &F, k: i64, offset: &[Q]) -> SchwartzFunction<i128> {
    SchwartzFunction::indicator(f, offset.len(), k, offset).unwrap()
}

/// All points `u / p^big` with `0 <= u < p^(2 big)` in each coordinate.
fn probe_points(p: u64, d: usize, big: i64) -> Vec<Vec<Q>> {
    let side = p.pow(2 * big as u32) as i64;
    let mut pts = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for pt in &pts {
            for u in 0..side {
                let mut v: Vec<Q> = pt.clone();
                v.push(qi(u) * p_pow_q(p, -big));
                next.push(v);
            }
        }
        pts = next;
    }
    pts
}

/// `∫ ψ(x·t) f(t) dt` by summing over cosets of `p^fine` in `p^{-wide}`,
/// ignoring the grid of `f`.
fn fourier_oracle(
    f: &SchwartzFunction<i128>,
    psi: &AdditiveCharacter<i128>,
    x: &[Q],
    wide: i64,
    fine: i64,
) -> CycloElement<i128> {
    let p = f.field().p();
    let d = f.dim();
    let side = p.pow((wide + fine) as u32) as i64;
    let mut acc = CycloElement::zero(f.field());
    let count = side.pow(d as u32);
    for idx in 0..count {
        let mut t = Vec::new();
        let mut r = idx;
        for _ in 0..d {
            t.push(qi(r % side) * p_pow_q(p, -wide));
            r /= side;
        }
        let v = f.eval(&t);
        if v.is_zero() {
            continue;
        }
        let arg: Q = x.iter().zip(&t).map(|(a, b)| a * b).sum();
        acc = &acc + &(&psi.eval(&arg).unwrap() * &v);
    }
    &acc * &CycloElement::from_rational(f.field(), &p_pow_q(p, -fine * d as i64))
}

#[test]
fn indicator_shapes() {
    let f = field(2, 4);
    let one = ind(&f, 0, &[qi(0)]);
    assert_eq!((one.support_exponent(), one.level_exponent(), one.table().len()), (0, 0, 1));
    assert!(one.table()[0].eq_at_precision(&CycloElement::one(&f)));
    // φ_3: support p^{-3} Z_p, constant there
    let phi = ind(&f, -3, &[qi(0)]);
    assert_eq!((phi.support_exponent(), phi.level_exponent()), (3, -3));
    let shifted = ind(&f, 1, &[qi(1)]);
    assert_eq!((shifted.support_exponent(), shifted.level_exponent()), (0, 1));
    assert!(shifted.table()[0].is_zero());
    assert!(shifted.eval(&[qi(3)]).eq_at_precision(&CycloElement::one(&f)));
    assert!(shifted.eval(&[qi(4)]).is_zero());
    // the same set described with a redundant offset
    assert!(ind(&f, 1, &[qi(-7)]).eq_at_precision(&shifted));
    let d2 = ind(&f, -1, &[q(1, 4), qi(0)]);
    assert_eq!((d2.support_exponent(), d2.level_exponent()), (2, -1));
    assert!(d2.eval(&[q(-1, 4), q(1, 2)]).eq_at_precision(&CycloElement::one(&f)));
    assert!(d2.eval(&[q(0, 1), q(1, 2)]).is_zero());
}

#[test]
fn canonical_form_is_minimal() {
    let f = field(3, 2);
    let one = CycloElement::one(&f);
    let z = CycloElement::zero(&f);
    // constant 1 on Z_3 written on the (1, 1) grid
    let table = (0..9)
        .map(|u| if u % 3 == 0 { one.clone() } else { z.clone() })
        .collect();
    let g = SchwartzFunction::from_table(&f, 1, 1, 1, table);
    assert_eq!((g.support_exponent(), g.level_exponent()), (0, 0));
    let zero = SchwartzFunction::from_table(&f, 1, 2, 1, vec![z.clone(); 27]);
    assert!(zero.is_zero());
    assert_eq!((zero.support_exponent(), zero.level_exponent()), (0, 0));
    assert_eq!(zero.sup_norm(), ValuationQ::Infinity);
}

#[test]
fn central_and_translation_actions() {
    let f = field(2, 4);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = sample::function(&mut rng, &f, 1, 3);
    let t = q(3, 8);
    let h = HeisenbergElement::new(vec![qi(0)], vec![qi(0)], t.clone()).unwrap();
    let lhs = heisenberg_act(&h, &g, &psi).unwrap();
    assert!(lhs.eq_at_precision(&g.scale(&psi.eval(&t).unwrap())));
    let a = q(1, 2);
    let h = HeisenbergElement::new(vec![a.clone()], vec![qi(0)], qi(0)).unwrap();
    let moved = heisenberg_act(&h, &ind(&f, 0, &[qi(0)]), &psi).unwrap();
    assert!(moved.eq_at_precision(&ind(&f, 0, &[-a])));
}

#[test]
fn modulation_by_half() {
    let f = field(2, 3);
    let psi = AdditiveCharacter::standard(&f);
    let h = HeisenbergElement::new(vec![qi(0)], vec![q(1, 2)], qi(0)).unwrap();
    let r = heisenberg_act(&h, &ind(&f, 0, &[qi(0)]), &psi).unwrap();
    assert_eq!((r.support_exponent(), r.level_exponent()), (0, 1));
    assert!(r.table()[0].eq_at_precision(&CycloElement::one(&f)));
    assert!(r.table()[1].eq_at_precision(&CycloElement::from_int(&f, -1)));
}

#[test]
fn insufficient_field_reports_requirement() {
    let f = field(2, 2);
    let psi = AdditiveCharacter::standard(&f);
    let h = HeisenbergElement::new(vec![qi(0)], vec![q(1, 8)], qi(0)).unwrap();
    let err = heisenberg_act(&h, &ind(&f, -1, &[qi(0)]), &psi).unwrap_err();
    assert_eq!(err, SchwartzError::InsufficientField { required: 4, available: 2 });
}

#[test]
fn window_cap() {
    let f = field(2, 2);
    let psi = AdditiveCharacter::standard(&f).with_window(3);
    let h = HeisenbergElement::new(vec![q(1, 16)], vec![qi(0)], qi(0)).unwrap();
    let err = heisenberg_act(&h, &ind(&f, 0, &[qi(0)]), &psi).unwrap_err();
    assert!(matches!(err, SchwartzError::WindowCap { m: 4, .. }));
}

#[test]
fn heisenberg_group_law_and_norm() {
    let f = field(2, 6);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let d = 1 + trial % 2;
        let g = sample::function(&mut rng, &f, d, if d == 1 { 3 } else { 1 });
        let h1 = sample::heisenberg(&mut rng, 2, d, -1, 1);
        let h2 = sample::heisenberg(&mut rng, 2, d, -1, 1);
        let step = heisenberg_act(&h1, &heisenberg_act(&h2, &g, &psi).unwrap(), &psi).unwrap();
        let once = heisenberg_act(&h1.compose(&h2), &g, &psi).unwrap();
        assert!(step.eq_at_precision(&once), "trial {trial}");
        assert_eq!(once.sup_norm(), g.sup_norm());
        let back = heisenberg_act(&h1.inverse(), &heisenberg_act(&h1, &g, &psi).unwrap(), &psi).unwrap();
        assert!(back.eq_at_precision(&g));
    }
}

#[test]
fn fourier_of_lattices() {
    let f = field(2, 7);
    let psi = AdditiveCharacter::standard(&f);
    let one = ind(&f, 0, &[qi(0)]);
    assert!(fourier(&one, &psi).unwrap().eq_at_precision(&one));
    for n in 1..=6 {
        let phi = ind(&f, -n, &[qi(0)]);
        let hat = fourier(&phi, &psi).unwrap();
        let pn = CycloElement::from_int(&f, 1 << n);
        assert!(hat.eq_at_precision(&ind(&f, n, &[qi(0)]).scale(&pn)));
        assert_eq!(hat.sup_norm(), ValuationQ::Finite(qi(n)));
        assert_eq!(phi.sup_norm(), ValuationQ::zero());
    }
}

#[test]
fn fourier_matches_fine_grid_oracle() {
    for (p, d, seed) in [(2u64, 1usize, 3u64), (3, 1, 4), (2, 2, 5)] {
        let f = field(p, 4);
        let psi = AdditiveCharacter::standard(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let g = sample::function(&mut rng, &f, d, if d == 1 { 2 } else { 1 });
            let hat = fourier(&g, &psi).unwrap();
            for x in probe_points(p, d, 2) {
                let want = fourier_oracle(&g, &psi, &x, 2, 3);
                assert!(hat.eval(&x).eq_at_precision(&want));
            }
            // F∘F is the reflection, F^4 the identity
            let twice = fourier(&hat, &psi).unwrap();
            for x in probe_points(p, d, 2) {
                let minus: Vec<Q> = x.iter().map(|c| -c).collect();
                assert!(twice.eval(&x).eq_at_precision(&g.eval(&minus)));
            }
            let four = fourier(&fourier(&twice, &psi).unwrap(), &psi).unwrap();
            assert!(four.eq_at_precision(&g));
        }
    }
}

#[test]
fn scaled_character_fourier() {
    let f = field(3, 4);
    let psi = AdditiveCharacter::scaled(&f, q(1, 3)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = sample::function(&mut rng, &f, 1, 2);
    let hat = fourier(&g, &psi).unwrap();
    for x in probe_points(3, 1, 2) {
        assert!(hat.eval(&x).eq_at_precision(&fourier_oracle(&g, &psi, &x, 2, 3)));
    }
}

#[test]
fn c_zero_generators() {
    let f = field(2, 6);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = sample::function(&mut rng, &f, 1, 2);
    let u = q(6, 1);
    let t = intertwine(&SymplecticMatrix::diagonal(&u).unwrap(), &g, &psi).unwrap();
    let b = q(3, 2);
    let s = intertwine(&SymplecticMatrix::upper(&b), &g, &psi).unwrap();
    for x in probe_points(2, 1, 2) {
        assert!(t.eval(&x).eq_at_precision(&g.eval(&[&u * &x[0]])));
        let chirp = psi.eval(&(q(1, 2) * &b * &x[0] * &x[0])).unwrap();
        assert!(s.eval(&x).eq_at_precision(&(&chirp * &g.eval(&x))));
    }
    assert!(intertwine(&SymplecticMatrix::identity(1), &g, &psi).unwrap().eq_at_precision(&g));
}

/// `T_g f (x)` straight from the integral over `y`, on a fine grid.
fn kernel_oracle(
    g: &SymplecticMatrix,
    f: &SchwartzFunction<i128>,
    psi: &AdditiveCharacter<i128>,
    x: &Q,
    wide: i64,
    fine: i64,
) -> CycloElement<i128> {
    let p = f.field().p();
    let (a, b, c, d) = (&g.a()[0][0], &g.b()[0][0], &g.c()[0][0], &g.d_block()[0][0]);
    let side = p.pow((wide + fine) as u32) as i64;
    let mut acc = CycloElement::zero(f.field());
    for u in 0..side {
        let y = qi(u) * p_pow_q(p, -wide) - x * a;
        let v = f.eval(&[x * a + &y]);
        if v.is_zero() {
            continue;
        }
        let arg = q(1, 2) * a * b * x * x + b * x * &y + q(1, 2) * (d / c) * &y * &y;
        acc = &acc + &(&psi.eval(&arg).unwrap() * &v);
    }
    &acc * &CycloElement::from_rational(f.field(), &p_pow_q(p, -fine))
}

#[test]
fn general_kernel_matches_integral() {
    let f = field(2, 8);
    let psi = AdditiveCharacter::standard(&f);
    let g = SymplecticMatrix::parse("1,1/2;2,2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = sample::function(&mut rng, &f, 1, 2);
    let t = intertwine(&g, &h, &psi).unwrap();
    for x in probe_points(2, 1, 2) {
        assert!(t.eval(&x).eq_at_precision(&kernel_oracle(&g, &h, &psi, &x[0], 3, 4)));
    }
}

#[test]
fn j_is_forward_fourier() {
    let f = field(2, 6);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = sample::function(&mut rng, &f, 1, 3);
    let j = SymplecticMatrix::j(1);
    assert!(intertwine(&j, &g, &psi).unwrap().eq_at_precision(&fourier(&g, &psi).unwrap()));
    let h = HeisenbergElement::new(vec![q(1, 2)], vec![qi(0)], qi(0)).unwrap();
    assert!(check_intertwining(&j, &h, &ind(&f, 0, &[qi(0)]), &psi).unwrap());
}

#[test]
fn reversed_sign_kernel_intertwines_inverse() {
    // ∫ψ(−xy) f(y) dy is the Fourier transform for the character ψ(−·)
    let f = field(2, 6);
    let psi = AdditiveCharacter::standard(&f);
    let neg = AdditiveCharacter::scaled(&f, qi(-1)).unwrap();
    let j = SymplecticMatrix::j(1);
    let jinv = j.inverse();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut mismatches = 0;
    for _ in 0..20 {
        let g = sample::function(&mut rng, &f, 1, 2);
        let h = sample::heisenberg(&mut rng, 2, 1, -1, 1);
        let lhs = heisenberg_act(&h, &fourier(&g, &neg).unwrap(), &psi).unwrap();
        let with_inv = fourier(&heisenberg_act(&h.transform(&jinv), &g, &psi).unwrap(), &neg).unwrap();
        assert!(lhs.eq_at_precision(&with_inv));
        let with_j = fourier(&heisenberg_act(&h.transform(&j), &g, &psi).unwrap(), &neg).unwrap();
        if !lhs.eq_at_precision(&with_j) {
            mismatches += 1;
        }
    }
    assert!(mismatches > 0);
}

#[test]
fn random_sl2_intertwining() {
    let f = field(2, 8);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut with_c = 0;
    for trial in 0..50 {
        let g = sample::sl2(&mut rng, 2, 0, 0);
        let h = sample::heisenberg(&mut rng, 2, 1, -1, 1);
        let fun = sample::function(&mut rng, &f, 1, 2);
        if !g.c()[0][0].is_zero() {
            with_c += 1;
        }
        assert!(check_intertwining(&g, &h, &fun, &psi).unwrap(), "trial {trial}: g = {g}");
    }
    assert!(with_c > 10);
}

#[test]
fn d2_generators_intertwine() {
    let f = field(2, 6);
    let psi = AdditiveCharacter::standard(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let a = vec![vec![qi(1), qi(2)], vec![qi(0), q(1, 2)]];
    let s = vec![vec![q(1, 2), qi(1)], vec![qi(1), qi(0)]];
    let gens = [
        SymplecticMatrix::j(2),
        SymplecticMatrix::block_diagonal(&a).unwrap(),
        SymplecticMatrix::block_upper(&s).unwrap(),
    ];
    for g in &gens {
        for _ in 0..4 {
            let h = sample::heisenberg(&mut rng, 2, 2, 0, 1);
            let fun = sample::function(&mut rng, &f, 2, 1);
            assert!(check_intertwining(g, &h, &fun, &psi).unwrap(), "g = {g}");
        }
    }
    let other = gens[0].mul(&gens[2]);
    let fun = sample::function(&mut rng, &f, 2, 1);
    assert!(matches!(intertwine(&other, &fun, &psi), Err(SchwartzError::Unsupported(_))));
}

#[test]
fn norm_growth_for_j() {
    let f = field(2, 7);
    let psi = AdditiveCharacter::standard(&f);
    let j = SymplecticMatrix::j(1);
    for n in 0..=6 {
        let r = norm_growth_family(&j, n, &psi).unwrap();
        assert!(r
            .value_at_zero
            .eq_at_precision(&CycloElement::from_rational(&f, &p_pow_q(2, -n))));
        assert_eq!(r.valuation_at_zero, ValuationQ::Finite(qi(-n)));
        assert_eq!(r.sup_norm, ValuationQ::Finite(qi(-n)));
        assert_eq!(r.input_sup_norm, ValuationQ::zero());
    }
}

#[test]
fn json_dump() {
    let f = field(2, 2);
    let g = ind(&f, 1, &[qi(1)]);
    let v = g.to_json();
    assert_eq!(v["m"], 0);
    assert_eq!(v["n"], 1);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    assert_eq!(v["entries"][1]["coset"][0], "1");
}
