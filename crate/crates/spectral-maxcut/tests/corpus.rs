//! The small-graph corpus: isomorphism-free enumeration sanity.

use spectral_maxcut::generators::connected_graphs;

#[test]
fn connected_count_n8() {
    let start = std::time::Instant::now();
    let graphs = connected_graphs(8).unwrap();
    assert_eq!(graphs.len(), 11117);
    eprintln!("n=8 enumeration: {:?}", start.elapsed());
}

#[test]
fn odd_cycle_beta_tightness_direction() {
    // For every odd cycle there is at least one failed edge in any
    // bipartition of any subset, so β(C_n) ≥ 1/n; the exact scan
    // confirms it up to n = 19.
    for n in (3..=19usize).step_by(2) {
        let g = spectral_maxcut::generators::cycle(n);
        let r = spectral_maxcut::bipartite::beta_exact(&g).unwrap();
        assert!(
            r.beta >= 1.0 / n as f64 - 1e-12,
            "beta(C_{n}) = {} < 1/{n}",
            r.beta
        );
        assert!(r.lower <= r.beta + 1e-9 && r.beta <= r.upper + 1e-9);
    }
}

#[test]
fn sandwich_and_gamma_bound_up_to_n12() {
    // Random sample at the upper end of the exact-oracle range.
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    let mut checked = 0;
    while checked < 12 {
        let n = rng.gen_range(9..=12);
        let g = spectral_maxcut::generators::gnp(n, rng.gen_range(0.25..0.7), rng.gen());
        if g.m() == 0 {
            continue;
        }
        let r = spectral_maxcut::bipartite::beta_exact(&g).unwrap();
        assert!(r.lower <= r.beta + 1e-9 && r.beta <= r.upper + 1e-9);
        let gamma = spectral_maxcut::gain::gamma_exact(&g).unwrap();
        assert!(gamma <= r.lambda_n.abs() + 1e-7);
        checked += 1;
    }
}
