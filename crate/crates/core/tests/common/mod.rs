#![allow(dead_code)]

use border_defense::{GameState, Matching, Point2, SpeedTable};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn p(x: f64, y: f64) -> Point2<f64> {
    Point2::new(x, y)
}

/// Two pursuers, two evaders; the reference 2v2 engagement.
pub fn example_one() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(&[p(-1.5, 4.2), p(9.3, 4.5)], &[p(4.1, 11.0), p(5.5, 12.2)]),
        SpeedTable::new(vec![1.0, 1.04], vec![0.81, 0.77]).unwrap(),
    )
}

/// The straight matching of [`example_one`]: `E1 <- P1`, `E2 <- P2`.
pub fn straight() -> Matching {
    Matching::from([(0, vec![0]), (1, vec![1])])
}

/// The crossed matching of [`example_one`]: `E1 <- P2`, `E2 <- P1`.
pub fn crossed() -> Matching {
    Matching::from([(0, vec![1]), (1, vec![0])])
}

/// 3v3 where pursuer 0 cannot stop evader 2 on its own.
pub fn three_on_three() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(
            &[p(-7.6, 7.1), p(0.9, 3.8), p(-2.6, 4.0)],
            &[p(-1.3, 9.3), p(-1.7, 10.7), p(6.9, 10.7)],
        ),
        SpeedTable::new(vec![1.0; 3], vec![0.6; 3]).unwrap(),
    )
}

/// 3v2 where the three pair options split between simultaneous and solo
/// capture depending on the evader.
pub fn three_on_two() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(&[p(6.4, 1.3), p(0.3, 0.1), p(-7.7, 2.0)], &[p(2.9, 9.6), p(-2.2, 9.6)]),
        SpeedTable::new(vec![1.0; 3], vec![0.5; 2]).unwrap(),
    )
}

/// 2v1 where neither pursuer stops the evader alone but the pair does.
pub fn rescue() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(&[p(-3.4, 1.6), p(3.6, 2.4)], &[p(0.0, 3.8)]),
        SpeedTable::new(vec![1.0, 1.0], vec![0.8]).unwrap(),
    )
}

/// 2v1 with a lens bottom well inside both arcs.
pub fn flank() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(&[p(0.3, 0.1), p(9.7, 0.4)], &[p(5.2, 4.1)]),
        SpeedTable::new(vec![1.0, 1.25], vec![0.6]).unwrap(),
    )
}

/// Identical pursuers mirrored across `x = 0` with both evaders on that line:
/// the two matchings tie exactly.
pub fn mirror() -> (GameState<f64>, SpeedTable<f64>) {
    (
        GameState::new(&[p(-4.0, 1.0), p(4.0, 1.0)], &[p(0.0, 8.0), p(0.0, 11.0)]),
        SpeedTable::new(vec![1.0, 1.0], vec![0.6, 0.6]).unwrap(),
    )
}

pub fn random_point(rng: &mut ChaCha8Rng, x: (f64, f64), y: (f64, f64)) -> Point2<f64> {
    p(rng.gen_range(x.0..x.1), rng.gen_range(y.0..y.1))
}

/// Random `n` v `m` instance: pursuers low, evaders higher up, every speed
/// ratio in `[0.4, 0.85]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (GameState<f64>, SpeedTable<f64>) {
    let ps: Vec<_> = (0..n).map(|_| random_point(rng, (-10.0, 10.0), (0.0, 6.0))).collect();
    let es: Vec<_> = (0..m).map(|_| random_point(rng, (-8.0, 8.0), (4.0, 14.0))).collect();
    let vp: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..1.2)).collect();
    let ve: Vec<f64> = (0..m).map(|_| rng.gen_range(0.4..0.85)).collect();
    (GameState::new(&ps, &es), SpeedTable::new(vp, ve).unwrap())
}
