mod common;

use common::chi_square;
use pumprecoil_core::{PhotonStatistics, PumpConfig, RecoilAccumulator, SamplerPlan, TrajectorySampler};

#[test]
fn emission_counts_follow_geometric_law() {
    let cfg = PumpConfig::builder().lambda2(0.25).eta(0.1, 0.075).nu_tilde(0.16).saturation(25.0).build().unwrap();
    let sampler = TrajectorySampler::new(&cfg).unwrap();
    let acc = sampler.run(SamplerPlan::new(7, 1_000_000), RecoilAccumulator::new).unwrap();
    let stats = PhotonStatistics::from_config(&cfg);

    let max = *acc.counts.keys().max().unwrap();
    let observed: Vec<u64> = (1..=max).map(|n| acc.counts.get(&n).copied().unwrap_or(0)).collect();
    let mut probs: Vec<f64> = (1..=max).map(|n| stats.pmf(n)).collect();
    *probs.last_mut().unwrap() += stats.tail(max);
    let (chi2, p) = chi_square(&observed, &probs, 0);
    assert!(p > 0.01, "chi2 = {chi2}, p = {p}");

    let mean = acc.mean_emissions();
    assert!(mean.z(stats.mean()).abs() < 3.0, "mean {mean:?}");

    // Standard error of the sample variance from the fourth central moment.
    let n = acc.count() as f64;
    let m = mean.mean;
    let (mut m2, mut m4) = (0.0, 0.0);
    for (k, c) in &acc.counts {
        let d = *k as f64 - m;
        m2 += *c as f64 * d * d / n;
        m4 += *c as f64 * d.powi(4) / n;
    }
    let se = ((m4 - m2 * m2) / n).sqrt();
    assert!(((m2 - stats.variance()) / se).abs() < 4.0, "variance {m2} ± {se}");
}
