//! Small exact linear algebra: F_2 row spaces and 2x2 Smith normal form.

/// Row-reduce a list of F_2 vectors (bitmask rows) to echelon form,
/// dropping zero rows.
pub fn f2_echelon(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Rank of the span of the given F_2 vectors.
pub fn f2_rank(rows: &[u64]) -> usize {
    f2_echelon(rows).len()
}

/// Whether v lies in the F_2 span of the rows.
pub fn f2_in_span(rows: &[u64], v: u64) -> bool {
    let basis = f2_echelon(rows);
    let mut v = v;
    for &b in &basis {
        let pivot = 1u64 << (63 - b.leading_zeros());
        if v & pivot != 0 {
            v ^= b;
        }
    }
    v == 0
}

fn gcd_u(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Smith normal form invariants (d1, d2) with d1 | d2 of a 2x2 integer
/// matrix: d1 is the gcd of the entries and d1*d2 the absolute determinant.
pub fn snf_2x2(m: [[i64; 2]; 2]) -> (u64, u64) {
    let entries = [m[0][0], m[0][1], m[1][0], m[1][1]];
    let d1 = entries
        .iter()
        .fold(0u64, |acc, &e| gcd_u(acc, e.unsigned_abs()));
    let det = (m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128)
        .unsigned_abs() as u64;
    if d1 == 0 {
        return (0, 0);
    }
    (d1, det / d1)
}

/// Invariant factors of Z/m x Z/n, i.e. (gcd, lcm).
pub fn merge_cyclic(m: u64, n: u64) -> (u64, u64) {
    snf_2x2([[m as i64, 0], [0, n as i64]])
}
