mod common;

use kcoreset::data::{approx_meb, inflate, inflate_traced, inject_outliers, parse_dataset, shuffled_order, LoadOptions};
use kcoreset::{dist, radius_with_outliers, run, Algorithm, ClusteringSolution, Dataset64, RunSpec};

#[test]
fn injection_in_seven_dimensions() {
    let s = common::random_dataset(500, 7, 3);
    let meb = approx_meb(&s);
    let (out, idx) = inject_outliers(&s, 200, 1).unwrap();
    assert_eq!(out.len(), 700);
    assert_eq!(idx, (500..700).collect::<Vec<_>>());
    for &i in &idx {
        let d = dist(out.point(i), meb.center.coords());
        assert!((d - 100.0 * meb.radius).abs() <= 1e-9 * d);
        for p in s.iter() {
            assert!(dist(out.point(i), p) >= 99.0 * meb.radius);
        }
    }
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            assert!(dist(out.point(i), out.point(j)) >= 10.0 * meb.radius);
        }
    }
    assert_eq!(inject_outliers(&s, 200, 1).unwrap().0, out);
    let line = Dataset64::from_scalars(&[0.0, 1.0]).unwrap();
    assert!(inject_outliers(&line, 3, 0).is_err());
    assert_eq!(inject_outliers(&line, 2, 0).unwrap().0.len(), 4);
}

#[test]
fn inflation_noise_variance() {
    let s = common::random_dataset(50, 3, 8);
    let (out, src) = inflate_traced(&s, 2000, 5).unwrap();
    assert_eq!(out.len(), 100_000);
    for j in 0..3 {
        let col: Vec<f64> = s.iter().map(|p| p[j]).collect();
        let range = col.iter().cloned().fold(f64::MIN, f64::max) - col.iter().cloned().fold(f64::MAX, f64::min);
        let sigma2 = (0.1 * range).powi(2);
        let noise: Vec<f64> = (0..out.len()).map(|i| out.point(i)[j] - s.point(src[i])[j]).collect();
        let mean = noise.iter().sum::<f64>() / noise.len() as f64;
        let var = noise.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (noise.len() - 1) as f64;
        assert!((var - sigma2).abs() <= 0.05 * sigma2, "coordinate {j}: {var} vs {sigma2}");
    }
}

#[test]
fn inflation_keeps_constant_coordinates() {
    let s = Dataset64::from_rows(&[[1.0, 4.0], [2.0, 4.0], [3.0, 4.0]]).unwrap();
    let out = inflate(&s, 1, 0).unwrap();
    assert_eq!(out.len(), 3);
    assert!(out.iter().all(|p| p[1] == 4.0));
}

#[test]
fn loading() {
    let s: Dataset64 = parse_dataset("0,0\n3,4\n6,8\n", &LoadOptions::default()).unwrap();
    assert_eq!((s.len(), s.dim()), (3, 2));
    let opts = LoadOptions { skip_header: true, columns: Some(vec![0, 2]) };
    let s: Dataset64 = parse_dataset("a b c\n1 2 3\n4 5 6\n", &opts).unwrap();
    assert_eq!(s.as_flat(), &[1.0, 3.0, 4.0, 6.0]);
    assert!(parse_dataset::<f64>("1,2\n3\n", &LoadOptions::default()).is_err());
    assert!(parse_dataset::<f64>("1,x\n", &LoadOptions::default()).is_err());
    assert!(parse_dataset::<f64>("", &LoadOptions::default()).is_err());
}

#[test]
fn solutions_round_trip_through_json() {
    let s = common::random_dataset(400, 4, 21);
    for algo in [Algorithm::OutliersMrDet, Algorithm::OutliersMrRand, Algorithm::OutliersStream, Algorithm::TwoPass] {
        let mut spec = RunSpec::new(algo, 4, 10);
        spec.mu = Some(2.0);
        spec.ell = Some(4);
        spec.seed = 77;
        spec.shuffle = true;
        let out = run(&s, &spec).unwrap();
        let text = serde_json::to_string(&out.solution).unwrap();
        let back: ClusteringSolution<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, out.solution);
        let r = radius_with_outliers(&s, &back.center_indices, back.z).unwrap().radius;
        assert_eq!(r, out.solution.radius);
        // seeded runs repeat exactly
        assert_eq!(run(&s, &spec).unwrap().solution, out.solution);
    }
}

#[test]
fn f32_pipeline_runs() {
    let s64 = common::random_dataset(300, 3, 4);
    let s32 = kcoreset::Dataset32::from_flat(3, s64.as_flat().iter().map(|&x| x as f32).collect()).unwrap();
    let mut spec = RunSpec::new(Algorithm::OutliersMrDet, 3, 5);
    spec.ell = Some(3);
    let a = run(&s32, &spec).unwrap();
    assert!(a.solution.radius > 0.0 && a.solution.centers.len() <= 3);
}

#[test]
fn shuffles_are_permutations() {
    let mut o = shuffled_order(1000, 9);
    assert_ne!(o, (0..1000).collect::<Vec<_>>());
    o.sort_unstable();
    assert_eq!(o, (0..1000).collect::<Vec<_>>());
}
