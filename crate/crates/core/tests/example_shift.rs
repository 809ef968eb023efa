//! The two-symbol example shift on D = {−1, 0} and its block map.

use cantor_tm::fixtures::{example_shift, ExampleTable};
use cantor_tm::radix::power_ratio;
use cantor_tm::{compile_blockmap, CantorPoint, RadixRational};
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Expected `(x scale, cx, y scale, cy)` for `x ↦ sx·x + cx`, `y ↦ sy·y + cy`,
/// read off the displayed formulas.
fn expected(word: &[u16]) -> (BigRational, BigRational, BigRational, BigRational) {
    match word {
        // A: (3x, y/3)
        [0, 1] => (r(3, 1), r(0, 1), r(1, 3), r(0, 1)),
        // B: (3(x − 2/3), (y − 2/3)/3)
        [1, 1] => (r(3, 1), r(-2, 1), r(1, 3), r(-2, 9)),
        // C, D: (x, y + 2/3)
        [0, 0] | [1, 0] => (r(1, 1), r(0, 1), r(1, 1), r(2, 3)),
        _ => unreachable!(),
    }
}

#[test]
fn consistent_table_gives_displayed_map() {
    let map = compile_blockmap(&example_shift(ExampleTable::Consistent));
    assert_eq!(map.radix(), 3);
    assert_eq!(map.pieces().len(), 4);
    for p in map.pieces() {
        let (sx, cx, sy, cy) = expected(&p.word);
        assert_eq!(power_ratio(3, p.map.x_exponent), sx, "{:?}", p.word);
        assert_eq!(power_ratio(3, p.map.y_exponent()), sy, "{:?}", p.word);
        assert_eq!(p.map.cx.to_ratio(), cx, "{:?}", p.word);
        assert_eq!(p.map.cy.to_ratio(), cy, "{:?}", p.word);
        assert_eq!(p.map.determinant(3), r(1, 1));
    }
}

#[test]
fn block_positions_follow_the_encoding() {
    // s₋₁ picks the first x digit, s₀ the first y digit
    let map = compile_blockmap(&example_shift(ExampleTable::Consistent));
    for p in map.pieces() {
        assert_eq!(p.domain.x_prefix, vec![2 * p.word[0] as u32]);
        assert_eq!(p.domain.y_prefix, vec![2 * p.word[1] as u32]);
    }
}

#[test]
fn pieces_act_on_points_like_the_formulas() {
    let map = compile_blockmap(&example_shift(ExampleTable::Consistent));
    // points with a few even ternary digits in each block
    for xd in [[0u32, 2, 0], [2, 0, 2], [0, 0, 2], [2, 2, 2]] {
        for yd in [[0u32, 2, 2], [2, 0, 0], [2, 2, 0], [0, 0, 0]] {
            let p = CantorPoint {
                x: RadixRational::from_fraction_digits(3, &xd),
                y: RadixRational::from_fraction_digits(3, &yd),
            };
            let word = [(xd[0] / 2) as u16, (yd[0] / 2) as u16];
            let (sx, cx, sy, cy) = expected(&word);
            let q = map.apply(&p);
            assert_eq!(q.x.to_ratio(), sx * p.x.to_ratio() + cx);
            assert_eq!(q.y.to_ratio(), sy * p.y.to_ratio() + cy);
        }
    }
}

#[test]
fn literal_table_disagrees_with_displayed_map() {
    let map = compile_blockmap(&example_shift(ExampleTable::Literal));
    let mismatches = map
        .pieces()
        .iter()
        .filter(|p| {
            let (sx, cx, _, cy) = expected(&p.word);
            power_ratio(3, p.map.x_exponent) != sx
                || p.map.cx.to_ratio() != cx
                || p.map.cy.to_ratio() != cy
        })
        .count();
    assert_eq!(mismatches, 2);
}
