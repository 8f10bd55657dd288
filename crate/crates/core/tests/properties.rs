use dpgof::rng::stream;
use dpgof::sim::draw_alternative;
use dpgof::stats::{evaluate, stat_k, StatisticId};
use dpgof::{mle, AlternativeSpec, FrequencyTable, Sample};
use rand::seq::SliceRandom;

fn median_k(alt: &AlternativeSpec, n: usize) -> f64 {
    let mut ks: Vec<f64> = (0..50u64)
        .map(|r| {
            let t = draw_alternative(alt, n, &mut stream(8, &[n as u64, r]))
                .unwrap()
                .compress();
            stat_k(&t, mle(&t).unwrap().nu_hat).unwrap().value
        })
        .collect();
    ks.sort_by(f64::total_cmp);
    0.5 * (ks[24] + ks[25])
}

#[test]
fn k_grows_linearly_under_alternative_and_stays_bounded_under_null() {
    let alt = AlternativeSpec::sum_du(2.0, 2);
    let sizes = [100, 1000, 10_000];
    let per_n: Vec<f64> = sizes
        .iter()
        .map(|&n| median_k(&alt, n) / n as f64)
        .collect();
    let floor = 0.5 * per_n[2];
    assert!(floor > 0.0);
    for (n, v) in sizes.iter().zip(&per_n) {
        assert!(*v >= floor, "n = {n}: median K/n = {v} below {floor}");
    }
    let null = AlternativeSpec::null(2.0);
    for n in sizes {
        let m = median_k(&null, n);
        assert!(m < 0.1, "n = {n}: null median K = {m}");
    }
}

#[test]
fn statistics_ignore_observation_order() {
    let ids = [
        StatisticId::KProposed,
        StatisticId::ZMeintanis { a: 1.0 },
        StatisticId::TStein { beta: 1.0 },
        StatisticId::CnE,
        StatisticId::SBen,
    ];
    for r in 0..10u64 {
        let mut rng = stream(123, &[r]);
        let spec = AlternativeSpec::max_du(1.5 + 0.2 * r as f64, 3);
        let sample = draw_alternative(&spec, 30, &mut rng).unwrap();
        let mut shuffled = sample.values().to_vec();
        shuffled.shuffle(&mut rng);
        let a = sample.compress();
        let b = Sample::new(shuffled).unwrap().compress();
        let via_counts = FrequencyTable::from_counts(a.iter()).unwrap();
        let nu = mle(&a).unwrap().nu_hat;
        for id in ids {
            let x = evaluate(id, &a, nu).unwrap().value;
            assert_eq!(x, evaluate(id, &b, nu).unwrap().value, "{id}");
            assert_eq!(x, evaluate(id, &via_counts, nu).unwrap().value, "{id}");
        }
    }
}
