//! Seeded sweeps over every small field: valuation additivity and agreement
//! of the two valuation routines.

use num_bigint::BigInt;
use padicq::padic::{valuation_by_resultant, CycloElement, CyclotomicField};
use padicq::{FastElement, FastField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

const PAIRS: usize = 1000;

fn random_element(f: &Arc<FastField>, rng: &mut ChaCha8Rng) -> FastElement {
    let p = f.p() as i64;
    let poly: Vec<BigInt> = (0..f.degree())
        .map(|_| {
            let c: i64 = rng.gen_range(-40..=40);
            BigInt::from(c * p.pow(rng.gen_range(0..3)))
        })
        .collect();
    CycloElement::from_pi_poly(f, &poly)
}

fn fields() -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for n in 1..=3 {
            out.push((p, n));
        }
    }
    out
}

#[test]
fn valuation_of_products_is_additive() {
    fields().into_par_iter().for_each(|(p, n)| {
        let f = CyclotomicField::<i128>::new(p, n, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p * 100 + n as u64);
        let mut checked = 0;
        while checked < PAIRS {
            let a = random_element(&f, &mut rng);
            let b = random_element(&f, &mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let ab = &a * &b;
            assert_eq!(
                ab.valuation(),
                a.valuation().add(&b.valuation()),
                "p={p} N={n}: {a} * {b}"
            );
            checked += 1;
        }
    });
}

#[test]
fn resultant_oracle_agrees() {
    fields().into_par_iter().for_each(|(p, n)| {
        let f = CyclotomicField::<i128>::new(p, n, 24).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7 + p * 100 + n as u64);
        let mut checked = 0;
        while checked < PAIRS {
            let a = random_element(&f, &mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(valuation_by_resultant(&a).unwrap(), a.valuation(), "p={p} N={n}: {a}");
            checked += 1;
        }
    });
}
