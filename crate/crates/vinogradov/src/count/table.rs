//! Open-addressed hash table from packed `u64` keys to `u64`
//! multiplicities, specialized for the counting workload: insert-or-add
//! and lookup only, no deletion, keys never zero-multiplicity.
//!
//! Values double as occupancy markers (`0` = empty slot), so the table
//! stores two flat arrays and nothing else. Probing is linear; the hash
//! is a Fibonacci multiply taking the top bits, which is cheap and mixes
//! the low-entropy packed keys well. Load factor is capped at 0.7.

/// Multiplicative constant for Fibonacci hashing: `2^64 / phi` rounded
/// to odd.
const FIBONACCI: u64 = 0x9E37_79B9_7F4A_7C15;

/// Maximum load factor numerator/denominator: grow when `len * 10 > cap * 7`.
const LOAD_NUM: usize = 7;
const LOAD_DEN: usize = 10;

/// Hash table mapping packed moment keys to multiplicities.
#[derive(Debug, Clone)]
pub struct PackedCountTable {
    keys: Vec<u64>,
    vals: Vec<u64>,
    len: usize,
    shift: u32,
}

impl PackedCountTable {
    /// Create a table sized for roughly `expected` entries.
    pub fn with_capacity(expected: usize) -> Self {
        // Smallest power of two with load below the cap at `expected`.
        let mut cap = 16usize;
        while cap * LOAD_NUM < expected * LOAD_DEN {
            cap *= 2;
        }
        PackedCountTable {
            keys: vec![0; cap],
            vals: vec![0; cap],
            len: 0,
            shift: 64 - cap.trailing_zeros(),
        }
    }

    /// Number of distinct keys stored.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn slot(&self, key: u64) -> usize {
        (key.wrapping_mul(FIBONACCI) >> self.shift) as usize
    }

    /// Add `weight` to the multiplicity of `key`.
    pub fn add(&mut self, key: u64, weight: u64) {
        debug_assert!(weight > 0, "zero weights would corrupt occupancy");
        if (self.len + 1) * LOAD_DEN > self.keys.len() * LOAD_NUM {
            self.grow();
        }
        let mask = self.keys.len() - 1;
        let mut i = self.slot(key);
        loop {
            if self.vals[i] == 0 {
                self.keys[i] = key;
                self.vals[i] = weight;
                self.len += 1;
                return;
            }
            if self.keys[i] == key {
                self.vals[i] += weight;
                return;
            }
            i = (i + 1) & mask;
        }
    }

    /// Multiplicity of `key` (0 if absent).
    pub fn get(&self, key: u64) -> u64 {
        let mask = self.keys.len() - 1;
        let mut i = self.slot(key);
        loop {
            if self.vals[i] == 0 {
                return 0;
            }
            if self.keys[i] == key {
                return self.vals[i];
            }
            i = (i + 1) & mask;
        }
    }

    fn grow(&mut self) {
        let new_cap = self.keys.len() * 2;
        let old_keys = std::mem::replace(&mut self.keys, vec![0; new_cap]);
        let old_vals = std::mem::replace(&mut self.vals, vec![0; new_cap]);
        self.shift = 64 - new_cap.trailing_zeros();
        let mask = new_cap - 1;
        for (k, v) in old_keys.into_iter().zip(old_vals) {
            if v == 0 {
                continue;
            }
            let mut i = self.slot(k);
            while self.vals[i] != 0 {
                i = (i + 1) & mask;
            }
            self.keys[i] = k;
            self.vals[i] = v;
        }
    }

    /// Iterate over `(key, multiplicity)` pairs in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.keys
            .iter()
            .zip(self.vals.iter())
            .filter(|(_, &v)| v != 0)
            .map(|(&k, &v)| (k, v))
    }
}
