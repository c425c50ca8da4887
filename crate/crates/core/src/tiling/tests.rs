use super::*;
use crate::fixtures;

use proptest::prelude::*;

fn eq_tile() -> Tile {
    fixtures::equilateral_tile()
}

fn sc_tile() -> Tile {
    fixtures::scalene_tile()
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn wv(strs: &[&str]) -> Vec<Word> {
    strs.iter().map(|s| w(s)).collect()
}

#[test]
fn word_string_convention_round_trips() {
    // "cba" applies a first, then b, then c
    let word = w("cba");
    assert_eq!(
        word.letters(),
        &[SideLabel::A, SideLabel::B, SideLabel::C]
    );
    assert_eq!(word.to_string(), "cba");
    assert_eq!(w("e").to_string(), "e");
    assert!(w("ba").extends(&w("a")));
    assert!(!w("ab").extends(&w("a")));
}

#[test]
fn reflect_twice_returns_original() {
    let tile = sc_tile();
    let div = Div::build(tile.clone(), &wv(&["e", "a", "ba"])).unwrap();
    for p in div.placements() {
        for s in SideLabel::ALL {
            let back = reflect_across_side(&tile, &reflect_across_side(&tile, p, s), s);
            assert!(back.iso.approx_eq(&p.iso, 1e-12));
            assert_eq!(back.orientation(), p.orientation());
        }
    }
}

#[test]
fn reflection_shares_side_and_is_disjoint() {
    let tile = eq_tile();
    let div = Div::build(tile.clone(), &wv(&["e", "a"])).unwrap();
    assert_eq!(div.n(), 2);
    assert_eq!(div.internal_sides().len(), 1);
    assert_eq!(div.internal_sides()[0].label, SideLabel::A);
    assert_eq!(div.placements()[1].orientation(), -1);
    assert!(div.is_realizable());
}

#[test]
fn chain4_matches_published_action() {
    let div = Div::build(eq_tile(), &fixtures::chain4_words()).unwrap();
    assert_eq!(div.n(), 4);
    let mut edges: Vec<(usize, usize, SideLabel)> = div
        .internal_sides()
        .iter()
        .map(|s| (s.copies.0, s.copies.1, s.label))
        .collect();
    edges.sort();
    assert_eq!(
        edges,
        vec![
            (0, 1, SideLabel::A),
            (1, 2, SideLabel::B),
            (2, 3, SideLabel::C)
        ]
    );
}

#[test]
fn single_tile_has_three_external_sides() {
    let div = Div::build(sc_tile(), &wv(&["e"])).unwrap();
    assert_eq!(div.n(), 1);
    assert!(div.internal_sides().is_empty());
    assert_eq!(div.external_sides().len(), 3);
}

#[test]
fn equilateral_fan_closes_and_dedups() {
    // wind around the vertex shared by sides a and b; the 7th word lands on
    // the starting copy and is deduplicated, leaving a 6-cycle
    let mut words = vec![Word::empty()];
    for k in 0..6 {
        let letter = if k % 2 == 0 { SideLabel::A } else { SideLabel::B };
        let last = words.last().unwrap().clone();
        words.push(last.extended(letter));
    }
    let div = Div::build(eq_tile(), &words).unwrap();
    assert_eq!(div.n(), 6);
    assert_eq!(div.internal_sides().len(), 6); // cycle: K = N
    assert_eq!(div.external_sides().len(), 6);
    assert!(div.is_realizable());
}

#[test]
fn word_not_extending_tree_is_rejected() {
    let err = Div::build(eq_tile(), &wv(&["e", "ba"])).unwrap_err();
    assert!(matches!(err, TilingError::Word(_)));
    let err = Div::build(eq_tile(), &wv(&["a", "e"])).unwrap_err();
    assert!(matches!(err, TilingError::Word(_)));
}

#[test]
fn manual_overlap_is_reported() {
    let tile = sc_tile();
    // second copy shifted by half a side length: partial overlap
    let shifted = Isometry::new(
        *Isometry::identity().linear(),
        crate::geom::Point::new(0.5, 0.0),
    )
    .unwrap();
    let div = Div::from_placements(
        tile.clone(),
        vec![
            Placement {
                copy: 0,
                word: Word::empty(),
                iso: Isometry::identity(),
            },
            Placement {
                copy: 1,
                word: Word::empty(),
                iso: shifted,
            },
        ],
    );
    let issues = div.check_realizable(tile.eps());
    assert_eq!(issues, vec![RealizabilityIssue::Overlap(0, 1)]);

    // coincident duplicates are reported as coincidence, not overlap
    let dup = Div::from_placements(
        tile.clone(),
        vec![
            Placement {
                copy: 0,
                word: Word::empty(),
                iso: Isometry::identity(),
            },
            Placement {
                copy: 1,
                word: Word::empty(),
                iso: Isometry::identity(),
            },
        ],
    );
    assert_eq!(
        dup.check_realizable(tile.eps()),
        vec![RealizabilityIssue::Coincidence(0, 1)]
    );
}

#[test]
fn coverage_partition_holds() {
    for words in [
        wv(&["e"]),
        wv(&["e", "a", "ba", "cba"]),
        fixtures::gww_left_words(),
        fixtures::gww_right_words(),
    ] {
        let div = Div::build(eq_tile(), &words).unwrap();
        assert_eq!(
            2 * div.internal_sides().len() + div.external_sides().len(),
            3 * div.n()
        );
    }
}

#[test]
fn equivalence_is_reflexive_and_finds_rotations() {
    let div = Div::build(sc_tile(), &wv(&["e", "b", "ab"])).unwrap();
    let id = div_equivalent(&div, &div).unwrap().unwrap();
    assert!(id.approx_eq(&Isometry::identity(), 1e-9));

    // rotate the tile itself by 90°: same words, rotated tile
    let rot = Isometry::rotation(Point::new(0.0, 0.0), std::f64::consts::FRAC_PI_2);
    let verts = sc_tile().vertices().map(|v| rot.apply(v));
    let rotated = Div::build(Tile::new(verts).unwrap(), &wv(&["e", "b", "ab"])).unwrap();
    let g = div_equivalent(&div, &rotated).unwrap().unwrap();
    assert!(g.approx_eq(&rot, 1e-9));
}

#[test]
fn gww_pair_is_not_equivalent() {
    for tile in [eq_tile(), sc_tile()] {
        let left = fixtures::gww_left(tile.clone());
        let right = fixtures::gww_right(tile.clone());
        assert_eq!(left.n(), 7);
        assert_eq!(right.n(), 7);
        assert!(div_equivalent(&left, &right).unwrap().is_none());
        assert!(div_equivalent(&left, &left).unwrap().is_some());
    }
}

#[test]
fn tile_mismatch_is_detected() {
    let div1 = Div::build(eq_tile(), &wv(&["e", "a"])).unwrap();
    let div2 = Div::build(sc_tile(), &wv(&["e", "a"])).unwrap();
    assert!(matches!(
        div_equivalent(&div1, &div2),
        Err(TilingError::TileMismatch)
    ));
}

#[test]
fn relabel_swap_is_involutive() {
    let div = Div::build(sc_tile(), &wv(&["e", "a", "ca"])).unwrap();
    let back = div
        .relabel_swap(SideLabel::A, SideLabel::C)
        .unwrap()
        .relabel_swap(SideLabel::A, SideLabel::C)
        .unwrap();
    assert!(div_equivalent(&div, &back).unwrap().is_some());
    for (p, q) in div.placements().iter().zip(back.placements()) {
        assert!(p.iso.approx_eq(&q.iso, 1e-12));
    }
}

#[test]
fn isosceles_swap_gives_mirror_image() {
    // tile with |a| = |c|: swapping a and c in the words produces the mirror
    // image (equivalence through the a↔c relabeling, orientation-reversing)
    let tile = fixtures::isosceles_tile();
    let div = Div::build(tile.clone(), &wv(&["e", "a", "ba"])).unwrap();
    let swapped = div.relabel_swap(SideLabel::A, SideLabel::C).unwrap();
    let map = [SideLabel::C, SideLabel::B, SideLabel::A];
    let g = div_equivalent_relabeled(&div, &swapped, map).unwrap().unwrap();
    assert_eq!(g.orientation(), -1);
}

#[test]
fn scalene_swap_is_not_mirror_equivalent() {
    let div = Div::build(sc_tile(), &wv(&["e", "a", "ba"])).unwrap();
    let swapped = div.relabel_swap(SideLabel::A, SideLabel::C).unwrap();
    // no label-swapping congruence exists for a scalene tile
    let map = [SideLabel::C, SideLabel::B, SideLabel::A];
    assert!(matches!(
        div_equivalent_relabeled(&div, &swapped, map),
        Err(TilingError::TileMismatch)
    ));
    // and the volumes are not equivalent outright either
    assert!(div_equivalent(&div, &swapped).unwrap().is_none());
}

#[test]
fn local_coordinates_round_trip() {
    let div = Div::build(sc_tile(), &wv(&["e", "c", "bc"])).unwrap();
    // identity copy: to_local is the identity
    let x = Point::new(0.4, 0.2);
    assert!((div.to_local(0, x).unwrap() - x).norm() < 1e-12);
    // labeled vertices map onto tile vertices
    for (ci, p) in div.placements().iter().enumerate() {
        for (k, v) in div.tile().vertices().iter().enumerate() {
            let xi = div.to_local(ci, p.iso.apply(*v)).unwrap();
            assert!((xi - div.tile().vertices()[k]).norm() < 1e-12);
        }
    }
    // shared-side midpoint: local images in the adjacent copies agree up to
    // the shared-side reflection
    let side = div.internal_sides()[0];
    let (i, j) = side.copies;
    let s = div.tile().side_of(side.label);
    let (a, b) = div.tile().side_endpoints(s);
    let mid_global = div.to_global(i, (a + b) / 2.0).unwrap();
    let xi_i = div.to_local(i, mid_global).unwrap();
    let xi_j = div.to_local(j, mid_global).unwrap();
    let refl = div.tile().reflection(side.label);
    assert!((refl.apply(xi_i) - xi_j).norm() < 1e-12);
    // out-of-copy points error
    assert!(matches!(
        div.to_local(0, Point::new(50.0, 50.0)),
        Err(TilingError::OutOfCopy { .. })
    ));
}

#[test]
fn json_round_trip_is_equivalent() {
    let div = Div::build(sc_tile(), &fixtures::gww_left_words()).unwrap();
    let text = div_to_json(&div);
    let again = div_from_json(&text).unwrap();
    assert!(div_equivalent(&div, &again).unwrap().is_some());
}

#[test]
fn unknown_format_version_is_rejected() {
    let div = Div::build(eq_tile(), &wv(&["e"])).unwrap();
    let mut file = DivFile::from_div(&div);
    file.format_version = 99;
    assert!(matches!(
        file.into_div(),
        Err(crate::error::IoError::FormatVersion(99, _))
    ));
}

#[test]
fn svg_contains_styled_sides() {
    let div = Div::build(eq_tile(), &wv(&["e", "a", "ba"])).unwrap();
    let svg = div_to_svg(&div);
    assert!(svg.contains("<svg"));
    assert!(svg.contains("stroke-dasharray=\"9,6\"")); // dashed b sides
    assert!(svg.contains("stroke-dasharray=\"2,5\"")); // dotted c sides
}

/// Random word trees over a given tile; may include coincidence-closing
/// words (they get deduplicated).
fn arb_words(max_len: usize) -> impl Strategy<Value = Vec<Word>> {
    proptest::collection::vec(0usize..3, 1..max_len).prop_map(|letters| {
        let mut words = vec![Word::empty()];
        let mut current = Word::empty();
        for l in letters {
            current = current.extended(SideLabel::from_index(l));
            words.push(current.clone());
        }
        words
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn involution_law_holds(words in arb_words(6)) {
        let tile = eq_tile();
        let div = Div::build(tile.clone(), &words).unwrap();
        for p in div.placements() {
            for s in SideLabel::ALL {
                let back = reflect_across_side(&tile, &reflect_across_side(&tile, p, s), s);
                prop_assert!(back.iso.approx_eq(&p.iso, 1e-12));
            }
        }
    }

    #[test]
    fn orientation_parity_matches_word_length(words in arb_words(6)) {
        let div = Div::build(eq_tile(), &words).unwrap();
        for p in div.placements() {
            let expect = if p.word.len() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(p.orientation(), expect);
        }
    }

    #[test]
    fn coverage_and_tree_bound(words in arb_words(6)) {
        let div = Div::build(eq_tile(), &words).unwrap();
        let n = div.n();
        let k = div.internal_sides().len();
        prop_assert_eq!(2 * k + div.external_sides().len(), 3 * n);
        prop_assert!(n == 1 || k >= n - 1);
        prop_assert!(div.is_realizable());
    }
}
