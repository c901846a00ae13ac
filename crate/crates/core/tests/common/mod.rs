#![allow(dead_code)]

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;

pub fn c(x: f64) -> C {
    Complex::new(x, 0.0)
}

/// Real value with `0.3 <= |x| < 3`, random sign, at least 0.1 away from
/// every integer.
pub fn generic_real(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let m: f64 = rng.gen_range(0.3..3.0);
        let x = if rng.gen::<bool>() { m } else { -m };
        if (x - x.round()).abs() > 0.1 {
            return x;
        }
    }
}

pub fn generic_complex(rng: &mut ChaCha8Rng) -> C {
    Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

pub fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
