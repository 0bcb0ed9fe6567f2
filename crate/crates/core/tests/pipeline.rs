use vietlab_core::io;
use vietlab_core::sampling::{hexagon, noisy_circle};
use vietlab_core::thickening::{sample_thickening, straight_line_path};
use vietlab_core::{
    bottleneck_distance, build_vr_filtration, persistence, vietoris_complex, Cover,
    DiscreteMeasure, ThickeningSpec,
};

#[test]
fn diagram_survives_a_file_roundtrip() {
    let space = noisy_circle(30, 0.05, 3).unwrap().to_metric();
    let d = persistence(&build_vr_filtration(&space, 1, 1.5).unwrap()).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("d.json");
    std::fs::write(&path, io::diagram_json(&d).unwrap()).unwrap();
    let back = io::read_diagram(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back, d);
    assert_eq!(bottleneck_distance(&d, &back, 1), 0.0);
}

#[test]
fn thickening_dump_reads_back() {
    let space = hexagon().to_metric();
    let spec = ThickeningSpec::new(space.clone(), Cover::diameter(1.2).unwrap()).unwrap();
    let sample = sample_thickening(&spec, 3, 2).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    io::write_thickening_dump(dir, &sample).unwrap();
    let text = std::fs::read_to_string(dir.join("measures.csv")).unwrap();
    let measures: Vec<DiscreteMeasure> = text
        .lines()
        .map(|l| io::parse_measure_record(l).unwrap())
        .collect();
    assert_eq!(measures.len(), sample.len());
    for (a, b) in measures.iter().zip(sample.measures()) {
        assert!(a.approx_eq(b, 1e-15));
        assert!(spec.member(a));
    }
    let metric =
        io::read_distance_matrix(std::fs::File::open(dir.join("distances.csv")).unwrap()).unwrap();
    assert_eq!(&metric, sample.metric());
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(metric.d(i, j), space.d(i, j));
        }
    }
}

#[test]
fn complex_dump_reads_back() {
    let space = hexagon().to_metric();
    let c = vietoris_complex(&space, &Cover::diameter(1.8).unwrap(), 3).unwrap();
    let text = io::complex_json(&c).unwrap();
    assert_eq!(io::read_complex(text.as_bytes(), 6).unwrap(), c);
}

#[test]
fn paths_inside_the_thickening() {
    let space = hexagon().to_metric();
    let spec = ThickeningSpec::new(space, Cover::diameter(1.01).unwrap()).unwrap();
    let zeta = DiscreteMeasure::new([(0, 0.5), (1, 0.5)]).unwrap();
    let target = DiscreteMeasure::new([(0, 1.0)]).unwrap();
    let path = straight_line_path(&spec, &zeta, &target, 2).unwrap();
    assert_eq!(
        path[1],
        DiscreteMeasure::new([(0, 0.75), (1, 0.25)]).unwrap()
    );
    let far = DiscreteMeasure::new([(2, 1.0)]).unwrap();
    assert!(straight_line_path(&spec, &zeta, &far, 2).is_err());
}
