mod common;

use common::{grid_points, uniform_points};
use kcoreset::mapreduce::{mu_tau_outliers, z_prime};
use kcoreset::oracle::DEFAULT_BUDGET;
use kcoreset::{
    brute_force_kcenter, brute_force_kcenter_outliers, gmm, kcenter_mr, kcenter_outliers_mr_det,
    kcenter_outliers_mr_rand, partition, radius_with_outliers, FirstCenter, MrConfig,
    PartitionMode,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::cases(48))]

    #[test]
    fn kcenter_within_two_plus_eps(
        s in uniform_points(6..=18, 2),
        k in 1usize..=3,
        ell in 1usize..=4,
        eps in 0.1f64..1.0,
        seeded in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let opt = brute_force_kcenter(&s, k, DEFAULT_BUDGET).unwrap().opt_radius;
        let first = if seeded { FirstCenter::Seeded } else { FirstCenter::FirstElement };
        let rep = kcenter_mr(&s, &MrConfig::new(k, 0, ell, eps).with_seed(seed).with_first_center(first)).unwrap();
        prop_assert!(rep.solution.centers.len() <= k);
        prop_assert!(rep.solution.radius <= (2.0 + eps) * opt * (1.0 + 1e-12));
        prop_assert_eq!(rep.union_size, rep.coreset_sizes.iter().sum::<usize>());
        let sizes = partition(s.len(), ell, PartitionMode::Chunked, seed).unwrap().sizes();
        for (&tau, &n_i) in rep.coreset_sizes.iter().zip(&sizes) {
            prop_assert!(tau >= k.min(n_i) && tau <= n_i);
        }
    }

    #[test]
    fn outlier_variants_within_three_plus_eps(
        s in uniform_points(6..=16, 2),
        k in 1usize..=2,
        z in 0usize..=3,
        ell in 1usize..=3,
        eps_hat in 0.05f64..0.2,
        seed in any::<u64>(),
    ) {
        prop_assume!(k + z < s.len());
        let opt = brute_force_kcenter_outliers(&s, k, z, DEFAULT_BUDGET).unwrap().opt_radius;
        let cfg = MrConfig::new(k, z, ell, eps_hat).with_seed(seed);
        let det = kcenter_outliers_mr_det(&s, &cfg).unwrap();
        let bound = (3.0 + 6.0 * eps_hat) * opt * (1.0 + 1e-12);
        prop_assert!(det.solution.radius <= bound, "det {} > {}", det.solution.radius, bound);
        prop_assert_eq!(det.base, k + z);
        let rand = kcenter_outliers_mr_rand(&s, &cfg).unwrap();
        prop_assert_eq!(rand.base, k + z_prime(z, ell, s.len()));
        for rep in [&det, &rand] {
            prop_assert!(rep.solution.centers.len() <= k);
            let again = radius_with_outliers(&s, &rep.solution.center_indices, z).unwrap().radius;
            prop_assert_eq!(again, rep.solution.radius);
            prop_assert_eq!(rep.union_size, rep.coreset_sizes.iter().sum::<usize>());
        }
    }

    #[test]
    fn larger_mu_extends_every_partition_coreset(
        s in grid_points(10..=80, 20),
        ell in 1usize..=5,
        k in 1usize..=3,
        z in 0usize..=3,
        mus in (1.0f64..4.0, 0.0f64..4.0),
    ) {
        let (lo, hi) = (mus.0, mus.0 + mus.1);
        let plan = partition(s.len(), ell, PartitionMode::Chunked, 0).unwrap();
        for idx in plan.members().into_iter().filter(|m| !m.is_empty()) {
            let local = s.select(&idx).unwrap();
            let a = gmm(&local, mu_tau_outliers(lo, k, z).min(idx.len()), 0).unwrap();
            let b = gmm(&local, mu_tau_outliers(hi, k, z).min(idx.len()), 0).unwrap();
            prop_assert_eq!(&b.center_indices[..a.len()], &a.center_indices[..]);
        }
    }

    #[test]
    fn partitions_cover_every_point_once(n in 1usize..200, ell in 1usize..20, seed in any::<u64>(), random in any::<bool>()) {
        let ell = ell.min(n);
        let mode = if random { PartitionMode::Random } else { PartitionMode::Chunked };
        let plan = partition(n, ell, mode, seed).unwrap();
        let mut seen: Vec<usize> = plan.members().concat();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(plan.sizes().len(), ell);
        if !random {
            let sizes = plan.sizes();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }
}

#[test]
fn round_one_order_does_not_change_results() {
    let s = common::random_dataset(3000, 3, 11);
    let cfg = MrConfig::new(5, 20, 7, 0.2).with_seed(4);
    let a = kcenter_outliers_mr_rand(&s, &cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| kcenter_outliers_mr_rand(&s, &cfg).unwrap());
    assert_eq!(a.solution, b.solution);
    assert_eq!(a.coreset_sizes, b.coreset_sizes);
}
