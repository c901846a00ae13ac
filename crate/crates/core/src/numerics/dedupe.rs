//! Merging of numerically coincident solution points.

use std::cmp::Ordering;

use crate::scalar::{Real, C};

/// Symmetry under which two points are considered the same.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// Entries from index `from` onward may be permuted freely.
    PermuteTail {
        from: usize,
    },
}

#[derive(Clone, Debug)]
pub struct Cluster<T> {
    pub point: Vec<C<T>>,
    pub multiplicity: usize,
}

/// Total order on complex numbers by (real part, imaginary part).
pub fn cmp_complex<T: Real>(a: &C<T>, b: &C<T>) -> Ordering {
    a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// Sorts the permutable block of `point`.
pub fn canonicalize<T: Real>(mut point: Vec<C<T>>, symmetry: Symmetry) -> Vec<C<T>> {
    if let Symmetry::PermuteTail { from } = symmetry {
        if from < point.len() {
            point[from..].sort_by(cmp_complex);
        }
    }
    point
}

fn close<T: Real>(a: C<T>, b: C<T>, atol: T, rtol: T) -> bool {
    (a - b).norm() <= atol + rtol * a.norm().max(b.norm())
}

fn same<T: Real>(a: &[C<T>], b: &[C<T>], atol: T, rtol: T, symmetry: Symmetry) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let from = match symmetry {
        Symmetry::None => a.len(),
        Symmetry::PermuteTail { from } => from.min(a.len()),
    };
    if !(0..from).all(|i| close(a[i], b[i], atol, rtol)) {
        return false;
    }
    // greedy matching of the permutable block; sort order alone is fragile
    // when two entries share a real part up to rounding
    let mut used = vec![false; a.len() - from];
    for &x in &a[from..] {
        let hit = b[from..].iter().enumerate().find(|(j, &y)| !used[*j] && close(x, y, atol, rtol));
        match hit {
            Some((j, _)) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// Canonicalizes every point and merges those that agree within
/// `atol + rtol * max(|x_i|, |y_i|)` component-wise. The first point seen in
/// each cluster is kept as representative.
pub fn dedupe<T: Real, I>(points: I, atol: T, rtol: T, symmetry: Symmetry) -> Vec<Cluster<T>>
where
    I: IntoIterator<Item = Vec<C<T>>>,
{
    let mut clusters: Vec<Cluster<T>> = Vec::new();
    for p in points {
        let p = canonicalize(p, symmetry);
        match clusters.iter_mut().find(|c| same(&c.point, &p, atol, rtol, symmetry)) {
            Some(c) => c.multiplicity += 1,
            None => clusters.push(Cluster { point: p, multiplicity: 1 }),
        }
    }
    clusters
}
