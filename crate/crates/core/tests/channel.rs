use macfb::channel::{
    info_quantities, output_distribution, verify_half_entropy_identity, ChannelModel,
    JointInputDistribution,
};
use macfb::feasible::{in_p, project_to_lower_face, sample_p, u_triple_of};
use macfb::infofn::raw;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_law(r: &mut ChaCha8Rng) -> JointInputDistribution {
    let t = r.gen_range(1..=3);
    let w: Vec<f64> = (0..t).map(|_| r.gen::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let p = w.iter().map(|x| x / total).collect();
    // a few exactly deterministic components
    let mut q = || -> f64 {
        match r.gen_range(0..8) {
            0 => 0.0,
            1 => 1.0,
            _ => r.gen(),
        }
    };
    let q1 = (0..t).map(|_| q()).collect();
    let q2 = (0..t).map(|_| q()).collect();
    JointInputDistribution::new(p, q1, q2).unwrap()
}

fn ent(ps: impl IntoIterator<Item = f64>) -> f64 {
    ps.into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Straight enumeration of `(x₁, x₂, n)` without any shared code.
fn reference(noisy: bool, d: &JointInputDistribution) -> (Vec<f64>, f64, f64) {
    let size = if noisy { 4 } else { 3 };
    let mut py = vec![0.0; size];
    for t in 0..d.t_card() {
        for x1 in 0..2 {
            for x2 in 0..2 {
                let a = if x1 == 0 { d.q1()[t] } else { 1.0 - d.q1()[t] };
                let b = if x2 == 0 { d.q2()[t] } else { 1.0 - d.q2()[t] };
                let w = d.p_t()[t] * a * b;
                if noisy {
                    py[x1 + x2] += w / 2.0;
                    py[x1 + x2 + 1] += w / 2.0;
                } else {
                    py[x1 + x2] += w;
                }
            }
        }
    }
    let hy = ent(py.iter().copied());
    // H(Y|X₁,X₂) is 1 bit on the noisy channel and 0 otherwise
    let i = hy - if noisy { 1.0 } else { 0.0 };
    (py, hy, i)
}

#[test]
fn enumeration_agrees_with_reference() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5_000 {
        let d = random_law(&mut r);
        for (noisy, ch) in [(true, ChannelModel::NOISY), (false, ChannelModel::ERASURE)] {
            let (py, hy, i) = reference(noisy, &d);
            let got = output_distribution(ch, &d);
            assert_eq!(got.len(), py.len());
            for (a, b) in got.entries().iter().zip(&py) {
                assert!((a - b).abs() <= 1e-14);
            }
            let q = info_quantities(ch, &d);
            assert!((q.h_y - hy).abs() <= 1e-12);
            assert!((q.i_x1x2_y - i.max(0.0)).abs() <= 1e-12);
        }
    }
}

#[test]
fn half_entropy_identity_on_random_laws() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20_000 {
        let d = random_law(&mut r);
        let c = verify_half_entropy_identity(&d);
        assert!(c.max_error() <= 1e-12, "{d:?}: {c:?}");
    }
}

#[test]
fn quantities_are_nonnegative_and_ordered() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20_000 {
        let d = random_law(&mut r);
        for ch in [ChannelModel::NOISY, ChannelModel::ERASURE] {
            let q = info_quantities(ch, &d);
            for v in [
                q.h_x1_given_t,
                q.h_x2_given_t,
                q.i_x1_y_given_x2,
                q.i_x2_y_given_x1,
                q.i_x1x2_y,
                q.h_y,
                q.h_x1_given_y_x2_t,
                q.h_x2_given_y_x1_t,
            ] {
                assert!(v >= 0.0);
            }
            assert!(q.i_x1x2_y <= q.h_y + 1e-12);
        }
    }
}

#[test]
fn information_quantities_respect_the_closed_form_caps() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20_000 {
        let d = random_law(&mut r);
        let t = u_triple_of(&d);
        assert!(in_p(&t), "{d:?} -> {t:?}");
        let q = info_quantities(ChannelModel::NOISY, &d);
        assert!(q.h_x1_given_t <= raw::h_phi(2.0 * t.u1) + 1e-10);
        assert!(q.h_x2_given_t <= raw::h_phi(2.0 * t.u2) + 1e-10);
        assert!(q.i_x1_y_given_x2 <= 0.5 * raw::h(t.u) + 1e-10);
        assert!(q.i_x2_y_given_x1 <= 0.5 * raw::h(t.u) + 1e-10);
        assert!(q.i_x1x2_y <= raw::h(0.5 * (1.0 - t.u)) + 1e-10);
        let e = info_quantities(ChannelModel::ERASURE, &d);
        assert!(e.h_y <= raw::mu(t.u) + 1e-10);
    }
}

#[test]
fn witness_law_output_mass() {
    let d = JointInputDistribution::binary_uniform(0.095109, 0.322050).unwrap();
    let py = output_distribution(ChannelModel::NOISY, &d);
    let mid = py.entries()[1] + py.entries()[2];
    assert!((mid - (1.0 + 0.355899) / 2.0).abs() < 5e-6);
    assert!((mid - 0.677950).abs() < 5e-6);
}

#[test]
fn projection_lands_on_the_lower_face() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 10_000 {
        let t = sample_p(&mut r);
        if t.u > 0.5 {
            assert_eq!(project_to_lower_face(&t).unwrap(), (0.25, 0.25));
            continue;
        }
        let (a, b) = project_to_lower_face(&t).unwrap();
        assert!(
            a >= t.u1 && a <= 0.25 && b >= t.u2 - 1e-15 && b <= 0.25,
            "{t:?}"
        );
        assert!((raw::f2(2.0 * a, 2.0 * b) - t.u).abs() <= 1e-10, "{t:?}");
        checked += 1;
    }
}
