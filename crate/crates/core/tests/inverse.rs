use lllsample::generate::{random_atomic_csp, random_scheme};
use lllsample::{
    inverse_sample, Exception, Mode, PartialProjectedConfig, SamplerContext, SamplerSchedule,
    Support,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn schedule(trial_cap: u64, component_cap: u64) -> SamplerSchedule {
    SamplerSchedule {
        eps: 0.1,
        steps: 0,
        steps_overridden: true,
        delta: 0.025,
        eta: 0.0,
        eta_overridden: true,
        trial_cap,
        component_cap,
        seed: 0,
        mode: Mode::Forced,
    }
}

#[test]
fn larger_caps_keep_accepted_outcomes() {
    let (mut accepted, mut raised) = (0, 0);
    for seed in 0..3000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=10);
        let q: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=4)).collect();
        let m = rng.gen_range(1..=2 * n);
        let f = random_atomic_csp(q.clone(), m, 1..=3, &mut rng);
        let h = random_scheme(&f, &mut rng);
        let x: Vec<u64> = q.iter().map(|&qv| rng.gen_range(0..qv)).collect();
        let y = h.project_assignment(&x);
        let mut mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
        mask[0] = false;
        let s: Vec<usize> = (0..n).filter(|&v| !mask[v]).collect();
        let ctx = SamplerContext::new(&f, &h).unwrap();
        let cfg = PartialProjectedConfig::new(&y, Support::Subset(&mask));
        let (r, l) = (rng.gen_range(1..4), rng.gen_range(1..5));
        let (big_r, big_l) = (r + rng.gen_range(0..50), l + rng.gen_range(0..20));
        let call_seed = rng.gen();

        let small = inverse_sample(
            &ctx,
            &schedule(r, l),
            &cfg,
            &s,
            &mut ChaCha8Rng::seed_from_u64(call_seed),
        );
        let large = inverse_sample(
            &ctx,
            &schedule(big_r, big_l),
            &cfg,
            &s,
            &mut ChaCha8Rng::seed_from_u64(call_seed),
        );
        if small.exception == Exception::None {
            accepted += 1;
            assert_eq!(large.exception, Exception::None, "seed {seed}");
            assert_eq!(small.values, large.values, "seed {seed}");
        } else {
            raised += 1;
        }
    }
    assert!(
        accepted > 100 && raised > 100,
        "accepted {accepted}, raised {raised}"
    );
}
