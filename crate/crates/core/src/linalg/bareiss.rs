//! Fraction-free rank over ℚ.
//!
//! Rows are scaled to primitive integer vectors and eliminated with
//! cross-multiplication `r <- a*r - b*pivot`, after which the row content is
//! divided out again. The bucket/pivot rule is the same as for field
//! elimination, so only the arithmetic differs.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Row;
use crate::field::{Field, PrimeField};

type IntRow = Vec<(usize, BigInt)>;

/// Scales a rational row by the lcm of its denominators and removes content.
pub(crate) fn primitive_integer_row(row: &[(usize, BigRational)]) -> IntRow {
    let lcm = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints: IntRow = row.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    make_primitive(ints)
}

fn make_primitive(mut row: IntRow) -> IntRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        for (_, v) in row.iter_mut() {
            *v = -&*v;
        }
    }
    row
}

/// `a*x - b*y` for sorted integer rows.
fn cross(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn fraction_free_rank(rows: Vec<Row<BigRational>>, ncols: usize) -> usize {
    let mut store: Vec<IntRow> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    let mut buckets: Vec<Vec<usize>> = alloc::vec![Vec::new(); ncols];
    for (id, row) in store.iter().enumerate() {
        if let Some((c, _)) = row.first() {
            buckets[*c].push(id);
        }
    }
    let mut rank = 0;
    for col in 0..ncols {
        let ids = core::mem::take(&mut buckets[col]);
        if ids.is_empty() {
            continue;
        }
        let pid = *ids.iter().min_by_key(|id| (store[**id].len(), **id)).expect("non-empty bucket");
        let pivot = core::mem::take(&mut store[pid]);
        let lead = pivot[0].1.clone();
        for id in ids {
            if id == pid {
                continue;
            }
            let row = core::mem::take(&mut store[id]);
            let g = lead.gcd(&row[0].1);
            let a = &lead / &g;
            let b = &row[0].1 / &g;
            let reduced = make_primitive(cross(&a, &row, &b, &pivot));
            if let Some((c, _)) = reduced.first() {
                buckets[*c].push(id);
            }
            store[id] = reduced;
        }
        rank += 1;
    }
    rank
}

const WORD_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Largest rank of the integer-scaled rows modulo a few word-sized primes.
/// Never exceeds the rank over ℚ.
pub(crate) fn modular_lower_bound(rows: &[Row<BigRational>], ncols: usize) -> usize {
    let int_rows: Vec<IntRow> = rows.iter().map(|r| primitive_integer_row(r)).collect();
    WORD_PRIMES
        .iter()
        .map(|&p| {
            let field = PrimeField::new(p).expect("word primes are prime");
            let big_p = BigInt::from(p);
            let reduced: Vec<Row<u64>> = int_rows
                .iter()
                .map(|row| {
                    row.iter()
                        .filter_map(|(c, v)| {
                            let r = v.mod_floor(&big_p).to_u64().expect("residue fits");
                            (r != 0).then_some((*c, r))
                        })
                        .collect()
                })
                .collect();
            field.rank_rows(reduced, ncols)
        })
        .max()
        .unwrap_or(0)
}
