use sdperc::oracle::{enumerate_fields, enumerate_z_event, ZEvent};
use sdperc::{
    build_box, connects, enumerate_event, enumerate_event_recursive, find_circuit, simulate, Config, InfinityProxy,
    LatticeKind, Params,
};

#[test]
fn routes_agree_on_every_small_lattice() {
    for kind in LatticeKind::ALL {
        let g = build_box(kind, 3).unwrap();
        if g.vertex_count() > 12 {
            continue;
        }
        for proxy in [InfinityProxy::SpansOpposite, InfinityProxy::TouchesBoundary] {
            for (p, delta) in [(0.45, 0.2), (0.8, 0.6)] {
                for event in [ZEvent::Theta, ZEvent::Spanning, ZEvent::OriginOccupied] {
                    let a = enumerate_z_event(&g, p, delta, proxy, event).unwrap().probability;
                    let b = enumerate_event_recursive(&g, p, delta, proxy, event).unwrap().probability;
                    assert!((a - b).abs() < 1e-12, "{kind} {proxy:?} {event:?}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn theta_is_monotone_in_delta() {
    let g = build_box(LatticeKind::SquareSite, 3).unwrap();
    let mut last = 0.0;
    for delta in [0.0, 0.1, 0.3, 0.6, 1.0] {
        let t = enumerate_z_event(&g, 0.6, delta, InfinityProxy::SpansOpposite, ZEvent::Theta)
            .unwrap()
            .probability;
        assert!(t >= last - 1e-15);
        last = t;
    }
    assert!((last - 1.0).abs() < 1e-12);
}

#[test]
fn custom_event_matches_named_event() {
    let g = build_box(LatticeKind::ChessBoard, 3).unwrap();
    let origin = g.origin();
    let named = enumerate_z_event(&g, 0.6, 0.3, InfinityProxy::SpansOpposite, ZEvent::OriginOccupied)
        .unwrap()
        .probability;
    let custom = enumerate_event(&g, 0.6, 0.3, InfinityProxy::SpansOpposite, |s| s.z.get(origin), "origin in Z")
        .unwrap()
        .probability;
    assert!((named - custom).abs() < 1e-14);
}

#[test]
fn monte_carlo_tracks_exact_theta_on_star_square() {
    let g = build_box(LatticeKind::StarSquareSite, 3).unwrap();
    let exact = enumerate_z_event(&g, 0.5, 0.25, InfinityProxy::TouchesBoundary, ZEvent::Theta)
        .unwrap()
        .probability;
    let params = Params::new(0.5, 0.25, 3, 40_000).unwrap();
    let est = simulate(&g, &params, InfinityProxy::TouchesBoundary).unwrap().theta;
    assert!((est.value - exact).abs() <= 4.0 * est.stderr, "{} vs {exact}", est.value);
}

#[test]
fn duality_on_triangular_site_is_exact() {
    let g = build_box(LatticeKind::TriangularSite, 4).unwrap();
    let origin = g.origin();
    let boundary = g.boundary().to_vec();
    for mask in 0u64..(1 << g.vertex_count()) {
        let config = Config::from_mask(&g, mask);
        let joined = connects(&g, &config, &[origin], &boundary).unwrap();
        let blocked = !config.get(origin) || find_circuit(&g, &config, true, false).unwrap().is_some();
        assert_ne!(joined, blocked, "mask {mask:#x}");
    }
}

#[test]
fn field_enumeration_gives_independent_marginals() {
    let g = build_box(LatticeKind::SquareSite, 2).unwrap();
    let both = enumerate_fields(&g, 0.3, 0.7, |x, y| x.get(0) && y.get(1)).unwrap().probability;
    assert!((both - 0.21).abs() < 1e-14);
}
