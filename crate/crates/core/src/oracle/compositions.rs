//! Weak compositions of `sum` into `parts` ordered non-negative integers.

/// Reverse-lexicographic: `(s,0,..,0)` first, `(0,..,0,s)` last.
#[derive(Debug, Clone)]
pub struct WeakCompositions {
    current: Vec<u64>,
    pending: bool,
}

impl WeakCompositions {
    pub fn new(sum: u64, parts: usize) -> Self {
        let mut current = vec![0; parts];
        let pending = match current.first_mut() {
            Some(first) => {
                *first = sum;
                true
            }
            None => sum == 0,
        };
        WeakCompositions { current, pending }
    }
}

impl Iterator for WeakCompositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if !self.pending {
            return None;
        }
        let out = self.current.clone();
        self.pending = advance(&mut self.current);
        Some(out)
    }
}

/// Steps `c` to its successor in place; `false` once `c` was the last one.
pub(crate) fn advance(c: &mut [u64]) -> bool {
    let Some(last) = c.len().checked_sub(1) else {
        return false;
    };
    let tail = c[last];
    c[last] = 0;
    match c[..last].iter().rposition(|&x| x > 0) {
        Some(j) => {
            c[j] -= 1;
            c[j + 1] = tail + 1;
            true
        }
        None => {
            c[last] = tail;
            false
        }
    }
}

/// Allocation-free visit of every composition.
pub(crate) fn visit(sum: u64, parts: usize, visitor: &mut impl FnMut(&[u64])) {
    if parts == 0 {
        if sum == 0 {
            visitor(&[]);
        }
        return;
    }
    let mut c = vec![0; parts];
    c[0] = sum;
    loop {
        visitor(&c);
        if !advance(&mut c) {
            break;
        }
    }
}
