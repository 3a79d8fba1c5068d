use std::collections::BTreeSet;

use clusterexp::cluster::numerator_table;
use clusterexp::geometry::{Orientation, Triangulation};
use clusterexp::matchings::{
    enumerate_angle_matchings, enumerate_discrete_subsets, rho_image, DiscreteMethod,
};
use clusterexp::qp::{build_qp, minimal_cuts};
use clusterexp::quiver::{quiver_of_triangulation, QuiverMode};
use clusterexp::snake::{build_phi, enumerate_edge_matchings, EdgeMatching, SnakeGraph};
use clusterexp::{expand, Method};

#[test]
fn formulas_match_the_oracle_up_to_five_diagonals() {
    for n in 1..=5 {
        for o in Orientation::all(n) {
            let t = Triangulation::from_orientation(n, &o).unwrap();
            let table =
                numerator_table(&quiver_of_triangulation(&t, QuiverMode::Ice), None).unwrap();
            assert_eq!(table.non_initial(), n * (n + 1) / 2);
            for i in 1..=n {
                for j in i..=n {
                    let oracle = table.get(i, j).unwrap();
                    for m in [
                        Method::Angles,
                        Method::Discrete,
                        Method::Cuts,
                        Method::Snake,
                    ] {
                        let f = expand(&t, i, j, m, None).unwrap();
                        assert_eq!(&f, oracle, "{m} on {o:?} [{i},{j}]");
                    }
                    let count = enumerate_angle_matchings(&t.subpolygon(i, j).unwrap()).len();
                    assert_eq!(oracle.eval_at_ones(), count.into());
                }
            }
        }
    }
}

#[test]
fn bijections_on_every_subpolygon() {
    for n in 1..=4 {
        for o in Orientation::all(n) {
            let t = Triangulation::from_orientation(n, &o).unwrap();
            for i in 1..=n {
                for j in i..=n {
                    let sub = t.subpolygon(i, j).unwrap();
                    let matchings = enumerate_angle_matchings(&sub);
                    let q = quiver_of_triangulation(&sub, QuiverMode::Ice);
                    let images: BTreeSet<_> = matchings
                        .iter()
                        .map(|a| rho_image(&sub, a).unwrap())
                        .collect();
                    assert_eq!(images.len(), matchings.len());
                    let discrete =
                        enumerate_discrete_subsets(&q, DiscreteMethod::BruteForce).unwrap();
                    assert_eq!(images, discrete.iter().cloned().collect());
                    let cuts: BTreeSet<Vec<usize>> = minimal_cuts(&build_qp(&sub))
                        .unwrap()
                        .into_iter()
                        .map(|c| c.0)
                        .collect();
                    assert_eq!(cuts, discrete.into_iter().map(|d| d.0).collect());

                    let g = SnakeGraph::of_triangulation(&sub);
                    let phi = build_phi(&sub).unwrap();
                    let pushed: BTreeSet<EdgeMatching> = matchings
                        .iter()
                        .map(|a| {
                            let mut e: Vec<usize> = a.0.iter().map(|x| phi[x]).collect();
                            e.sort();
                            EdgeMatching(e)
                        })
                        .collect();
                    assert_eq!(pushed, enumerate_edge_matchings(&g).into_iter().collect());
                }
            }
        }
    }
}

#[test]
fn json_documents_round_trip() {
    for o in Orientation::all(5) {
        let t = Triangulation::from_orientation(5, &o).unwrap();
        let text = serde_json::to_string(&t.to_doc()).unwrap();
        assert_eq!(Triangulation::from_json_str(&text).unwrap(), t);
    }
    let by_orientation = Triangulation::from_json_str(r#"{"n":3,"orientation":"FB"}"#).unwrap();
    assert_eq!(
        by_orientation,
        Triangulation::from_orientation(3, &[Orientation::Forward, Orientation::Backward]).unwrap()
    );
}
