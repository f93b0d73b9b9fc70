//! Binary max-heap ordered by a caller-supplied comparator.

use std::cmp::Ordering;

pub(crate) struct Heap<T> {
    data: Vec<T>,
}

impl<T> Heap<T> {
    pub fn new() -> Self {
        Heap { data: Vec::new() }
    }

    pub fn peek(&self) -> Option<&T> {
        self.data.first()
    }

    pub fn push(&mut self, item: T, cmp: &impl Fn(&T, &T) -> Ordering) {
        self.data.push(item);
        let mut i = self.data.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if cmp(&self.data[i], &self.data[parent]) == Ordering::Greater {
                self.data.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    pub fn pop(&mut self, cmp: &impl Fn(&T, &T) -> Ordering) -> Option<T> {
        let n = self.data.len();
        if n == 0 {
            return None;
        }
        self.data.swap(0, n - 1);
        let top = self.data.pop();
        let n = n - 1;
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut big = i;
            if l < n && cmp(&self.data[l], &self.data[big]) == Ordering::Greater {
                big = l;
            }
            if r < n && cmp(&self.data[r], &self.data[big]) == Ordering::Greater {
                big = r;
            }
            if big == i {
                break;
            }
            self.data.swap(i, big);
            i = big;
        }
        top
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_descending() {
        let mut h = Heap::new();
        let cmp = |a: &i32, b: &i32| a.cmp(b);
        for x in [5, 1, 9, 3, 9, 0, -2, 7] {
            h.push(x, &cmp);
        }
        let mut out = Vec::new();
        while let Some(x) = h.pop(&cmp) {
            out.push(x);
        }
        assert_eq!(out, vec![9, 9, 7, 5, 3, 1, 0, -2]);
    }
}
