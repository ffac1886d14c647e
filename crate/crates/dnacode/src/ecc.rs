//! Classical error-correction primitives: prime fields, Hamming codes, and
//! quaternary Varshamov-Tenengolts single-insdel machinery.

use crate::error::{Error, Result};

/// Integers mod q for prime q. Elements are u64 values below q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<PrimeField> {
        if q < 2 || (2..q).take_while(|d| d * d <= q).any(|d| q.is_multiple_of(d)) {
            return Err(Error::InvalidParams(format!("{} is not prime", q)));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        base %= self.q;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// [t, t-r, 3] Hamming code over F_q with t = (q^r - 1)/(q - 1).
///
/// Parity-check columns are the canonical projective representatives (first
/// nonzero entry 1) in lexicographic order; the unit-vector columns form the
/// parity positions, everything else carries the message in position order.
pub struct HammingCode {
    field: PrimeField,
    r: usize,
    t: usize,
    columns: Vec<Vec<u64>>,
    parity_pos: Vec<usize>,
    message_pos: Vec<usize>,
}

impl HammingCode {
    pub fn new(q: u64, r: usize) -> Result<HammingCode> {
        let field = PrimeField::new(q)?;
        if r < 2 {
            return Err(Error::InvalidParams(format!("r = {} must be >= 2", r)));
        }
        let t_big = (0..r).fold(0u128, |acc, i| acc + (q as u128).pow(i as u32));
        let t = usize::try_from(t_big)
            .map_err(|_| Error::InvalidParams(format!("code length {} too large", t_big)))?;

        // canonical reps in lex order: leading zeros descending, then the
        // free tail counting up in base q
        let mut columns = Vec::with_capacity(t);
        for zeros in (0..r).rev() {
            let free = r - zeros - 1;
            let mut tail = vec![0u64; free];
            loop {
                let mut col = vec![0u64; zeros];
                col.push(1);
                col.extend_from_slice(&tail);
                columns.push(col);
                let mut k = free;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    tail[k] += 1;
                    if tail[k] < q {
                        break;
                    }
                    tail[k] = 0;
                }
                if tail.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        debug_assert_eq!(columns.len(), t);

        let mut parity_pos = vec![usize::MAX; r];
        for (j, col) in columns.iter().enumerate() {
            if col.iter().filter(|&&v| v != 0).count() == 1 {
                let row = col.iter().position(|&v| v == 1).unwrap();
                parity_pos[row] = j;
            }
        }
        let message_pos: Vec<usize> = (0..t).filter(|j| !parity_pos.contains(j)).collect();

        Ok(HammingCode {
            field,
            r,
            t,
            columns,
            parity_pos,
            message_pos,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.t - self.r
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn encode(&self, msg: &[u64]) -> Result<Vec<u64>> {
        if msg.len() != self.k() {
            return Err(Error::InvalidParams(format!(
                "message length {} differs from dimension {}",
                msg.len(),
                self.k()
            )));
        }
        if msg.iter().any(|&v| v >= self.q()) {
            return Err(Error::InvalidParams("message symbol outside field".into()));
        }
        let mut cw = vec![0u64; self.t];
        for (v, &j) in msg.iter().zip(&self.message_pos) {
            cw[j] = *v;
        }
        // parity column e_k touches only row k, so p_k cancels that row's sum
        for k in 0..self.r {
            let mut acc = 0u64;
            for &j in &self.message_pos {
                acc = self.field.add(acc, self.field.mul(self.columns[j][k], cw[j]));
            }
            cw[self.parity_pos[k]] = self.field.neg(acc);
        }
        Ok(cw)
    }

    fn syndrome(&self, word: &[u64]) -> Vec<u64> {
        let mut s = vec![0u64; self.r];
        for (j, &v) in word.iter().enumerate() {
            for k in 0..self.r {
                s[k] = self.field.add(s[k], self.field.mul(self.columns[j][k], v));
            }
        }
        s
    }

    fn extract(&self, cw: &[u64]) -> Vec<u64> {
        self.message_pos.iter().map(|&j| cw[j]).collect()
    }

    /// Correct one substitution (no erasures) or up to two erasures (no
    /// substitution), then return the message.
    pub fn decode(&self, received: &[u64], erasures: &[usize]) -> Result<Vec<u64>> {
        if received.len() != self.t {
            return Err(Error::InvalidParams(format!(
                "received length {} differs from code length {}",
                received.len(),
                self.t
            )));
        }
        if received.iter().any(|&v| v >= self.q()) {
            return Err(Error::InvalidParams("received symbol outside field".into()));
        }
        if erasures.len() > 2 {
            return Err(Error::InvalidParams(format!(
                "{} erasures exceed the correctable limit of 2",
                erasures.len()
            )));
        }
        if erasures.iter().any(|&j| j >= self.t) {
            return Err(Error::InvalidParams("erasure position out of range".into()));
        }

        let mut word = received.to_vec();
        for &j in erasures {
            word[j] = 0;
        }
        let s = self.syndrome(&word);

        if erasures.is_empty() {
            if s.iter().all(|&v| v == 0) {
                return Ok(self.extract(&word));
            }
            // s = lambda * h_j for exactly one column; the first nonzero
            // entry of a canonical column is 1, so lambda reads off directly
            for (j, col) in self.columns.iter().enumerate() {
                let lead = col.iter().position(|&v| v != 0).unwrap();
                let lambda = s[lead];
                if lambda != 0
                    && (0..self.r).all(|k| self.field.mul(lambda, col[k]) == s[k])
                {
                    word[j] = self.field.sub(word[j], lambda);
                    return Ok(self.extract(&word));
                }
            }
            return Err(Error::DecodeFailure(
                "syndrome matches no single substitution".into(),
            ));
        }

        // zeroing the erased entries shifts the syndrome by -sum x_e * h_e,
        // so solve against -s; exact consistency is demanded: any extra
        // substitution leaves the system unsolvable
        let target: Vec<u64> = s.iter().map(|&v| self.field.neg(v)).collect();
        let sol = self.solve_erasures(erasures, &target)?;
        for (&j, &v) in erasures.iter().zip(&sol) {
            word[j] = v;
        }
        Ok(self.extract(&word))
    }

    fn solve_erasures(&self, erasures: &[usize], s: &[u64]) -> Result<Vec<u64>> {
        let f = &self.field;
        let m = erasures.len();
        // augmented r x (m+1) system, Gaussian elimination
        let mut rows: Vec<Vec<u64>> = (0..self.r)
            .map(|k| {
                let mut row: Vec<u64> = erasures.iter().map(|&j| self.columns[j][k]).collect();
                row.push(s[k]);
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..m {
            let Some(p) = (pivot_row..self.r).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, p);
            let inv = f.inv(rows[pivot_row][col]);
            for v in rows[pivot_row].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for i in 0..self.r {
                if i != pivot_row && rows[i][col] != 0 {
                    let factor = rows[i][col];
                    for c in 0..=m {
                        let sub = f.mul(factor, rows[pivot_row][c]);
                        rows[i][c] = f.sub(rows[i][c], sub);
                    }
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        // distinct projective columns are linearly independent for m <= 2
        if pivots.len() != m {
            return Err(Error::DecodeFailure(
                "erasure columns are degenerate".into(),
            ));
        }
        if rows[pivot_row..].iter().any(|row| row[m] != 0) {
            return Err(Error::DecodeFailure(
                "erasure system inconsistent with the syndrome".into(),
            ));
        }
        let mut sol = vec![0u64; m];
        for &(row, col) in &pivots {
            sol[col] = rows[row][m];
        }
        Ok(sol)
    }
}

/// Ascent indicator of consecutive symbols: bit i is 1 when x[i+1] >= x[i].
pub fn signature(x: &[u8]) -> Vec<u8> {
    x.windows(2).map(|w| (w[1] >= w[0]) as u8).collect()
}

/// (Syn(alpha(x)) mod N, sum(x) mod 4) with positions weighted 1-based.
pub fn vt_syndromes(x: &[u8]) -> (u64, u8) {
    let n = x.len() as u64;
    debug_assert!(n >= 1);
    let syn = signature(x)
        .iter()
        .enumerate()
        .map(|(i, &a)| (i as u64 + 1) * a as u64)
        .sum::<u64>()
        % n;
    let sum = (x.iter().map(|&v| v as u64).sum::<u64>() % 4) as u8;
    (syn, sum)
}

/// One residue class T_{a,b}(N;4) of the quaternary VT partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VtClass {
    n: usize,
    a: u64,
    b: u8,
}

impl VtClass {
    pub fn new(n: usize, a: u64, b: u8) -> Result<VtClass> {
        if n == 0 || a >= n as u64 || b >= 4 {
            return Err(Error::InvalidParams(format!(
                "VT class ({}, {}) invalid for length {}",
                a, b, n
            )));
        }
        Ok(VtClass { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u8 {
        self.b
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        x.len() == self.n && vt_syndromes(x) == (self.a, self.b)
    }
}

/// Recover the unique class member within one deletion or insertion of
/// `received`. Length dispatch is strict: a length-N input is not this
/// operation's job.
pub fn vt_decode_insdel(received: &[u8], cls: &VtClass) -> Result<Vec<u8>> {
    let n = cls.n();
    if received.iter().any(|&v| v >= 4) {
        return Err(Error::InvalidParams("symbol outside the alphabet".into()));
    }
    let candidates: Vec<Vec<u8>> = if received.len() + 1 == n {
        // the deleted value is pinned by the checksum; try every position
        let sum: u64 = received.iter().map(|&v| v as u64).sum();
        let v = ((cls.b() as u64 + 4 - sum % 4) % 4) as u8;
        (0..=received.len())
            .map(|p| {
                let mut c = received.to_vec();
                c.insert(p, v);
                c
            })
            .filter(|c| cls.contains(c))
            .collect()
    } else if received.len() == n + 1 {
        let sum: u64 = received.iter().map(|&v| v as u64).sum();
        let v = ((sum % 4 + 4 - cls.b() as u64 % 4) % 4) as u8;
        (0..received.len())
            .filter(|&p| received[p] == v)
            .map(|p| {
                let mut c = received.to_vec();
                c.remove(p);
                c
            })
            .filter(|c| cls.contains(c))
            .collect()
    } else {
        return Err(Error::InvalidParams(format!(
            "received length {} is not {} +- 1",
            received.len(),
            n
        )));
    };

    let mut distinct = candidates;
    distinct.sort();
    distinct.dedup();
    match distinct.len() {
        1 => Ok(distinct.pop().unwrap()),
        0 => Err(Error::DecodeFailure(
            "no class member within one insdel".into(),
        )),
        _ => Err(Error::DecodeFailure(
            "multiple class members within one insdel".into(),
        )),
    }
}
