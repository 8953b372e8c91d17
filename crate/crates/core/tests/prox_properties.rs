//! Envelope and prox properties on random instances and points.

use rppa_core::certify::{random_prox_instance, random_smooth_instance};
use rppa_core::math::{gaussian_vector, seeded_rng};
use rppa_core::prox::catalog;
use rppa_core::Vector;

const DIM: usize = 3;
const LAMBDAS: [f64; 4] = [0.1, 0.5, 1.0, 4.0];

fn slack(scale: f64) -> f64 {
    1e-12 * scale.max(1.0)
}

#[test]
fn moreau_gradient_matches_central_differences() {
    let mut rng = seeded_rng(11);
    let h = 1e-6;
    for kind in 0..5 {
        for &lambda in &LAMBDAS {
            for _ in 0..25 {
                let inst = random_prox_instance(&mut rng, DIM, kind);
                let x = gaussian_vector(&mut rng, DIM, 2.0);
                let g = inst.moreau_grad(&x, lambda).unwrap();
                for i in 0..DIM {
                    let e = Vector::unit(DIM, i);
                    let up = inst.moreau_value(&x.axpy(h, &e), lambda).unwrap();
                    let down = inst.moreau_value(&x.axpy(-h, &e), lambda).unwrap();
                    let fd = (up - down) / (2.0 * h);
                    assert!(
                        (fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0),
                        "{} lambda={lambda} coord {i}: fd {fd} grad {}",
                        inst.label(),
                        g[i]
                    );
                }
            }
        }
    }
}

#[test]
fn prox_is_firmly_nonexpansive_and_envelope_gradient_is_monotone() {
    let mut rng = seeded_rng(12);
    for kind in 0..5 {
        for &lambda in &LAMBDAS {
            for _ in 0..50 {
                let inst = random_prox_instance(&mut rng, DIM, kind);
                let x = gaussian_vector(&mut rng, DIM, 3.0);
                let y = gaussian_vector(&mut rng, DIM, 3.0);
                let (px, py) = (inst.prox(&x, lambda).unwrap(), inst.prox(&y, lambda).unwrap());
                let d = x.dist(&y);
                assert!(px.dist(&py) <= d + slack(d), "{} nonexpansive", inst.label());
                let firm = (&px - &py).dot(&(&x - &y)) - px.dist_sq(&py);
                assert!(firm >= -slack(d * d), "{} firm {firm}", inst.label());

                let (gx, gy) = (
                    inst.moreau_grad(&x, lambda).unwrap(),
                    inst.moreau_grad(&y, lambda).unwrap(),
                );
                assert!(
                    (&gx - &gy).dot(&(&x - &y)) >= -slack(d * d / lambda),
                    "{} monotone",
                    inst.label()
                );
                assert!(
                    gx.dist(&gy) <= d / lambda + slack(d / lambda),
                    "{} 1/lambda-Lipschitz",
                    inst.label()
                );
            }
        }
    }
}

#[test]
fn envelope_identities_hold() {
    let mut rng = seeded_rng(13);
    for kind in 0..5 {
        for &lambda in &LAMBDAS {
            for _ in 0..50 {
                let inst = random_prox_instance(&mut rng, DIM, kind);
                let x = inst.prox(&gaussian_vector(&mut rng, DIM, 3.0), 1.0).unwrap();
                let env = inst.moreau_value(&x, lambda).unwrap();
                let z = inst.prox(&x, lambda).unwrap();
                let g = inst.moreau_grad(&x, lambda).unwrap();
                let fz = inst.eval(&z).unwrap();
                let expected = fz + 0.5 * lambda * g.norm_sq();
                assert!((env - expected).abs() <= slack(env.abs()), "{}", inst.label());
                assert!(
                    env <= inst.eval(&x).unwrap() + slack(env.abs()),
                    "{} envelope below f",
                    inst.label()
                );
                assert!(
                    env >= inst.f_star() - slack(env.abs()),
                    "{} envelope above f*",
                    inst.label()
                );
            }
        }
    }
}

#[test]
fn minimizers_are_fixed_points_with_zero_envelope_gradient() {
    for inst in catalog(4) {
        for &lambda in &LAMBDAS {
            let z = inst.prox(inst.x_star(), lambda).unwrap();
            assert!(z.dist(inst.x_star()) <= 1e-14, "{}", inst.label());
            let env = inst.moreau_value(inst.x_star(), lambda).unwrap();
            assert!((env - inst.f_star()).abs() <= 1e-14, "{}", inst.label());
        }
    }
}

#[test]
fn smooth_gradients_are_lipschitz() {
    let mut rng = seeded_rng(14);
    for kind in 0..2 {
        for _ in 0..200 {
            let inst = random_smooth_instance(&mut rng, DIM, kind);
            let x = gaussian_vector(&mut rng, DIM, 3.0);
            let y = gaussian_vector(&mut rng, DIM, 3.0);
            let (gx, gy) = (inst.grad(&x).unwrap(), inst.grad(&y).unwrap());
            let bound = inst.lipschitz() * x.dist(&y);
            assert!(gx.dist(&gy) <= bound + slack(bound), "{}", inst.label());
            let gap = inst.eval(&x).unwrap() - inst.eval(&y).unwrap() - gy.dot(&(&x - &y));
            let lower = gx.dist_sq(&gy) / (2.0 * inst.lipschitz());
            assert!(gap >= lower - slack(gap.abs()), "{} interpolation", inst.label());
            assert!(inst.grad(inst.x_star()).unwrap().norm() <= 1e-14);
            assert_eq!(inst.eval(inst.x_star()).unwrap(), inst.h_star());
        }
    }
}
