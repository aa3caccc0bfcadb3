/// Epoch-stamped membership array: `clear` is O(1) amortised, so one
/// allocation can be reused across many short-lived vertex subsets.
#[derive(Clone, Debug)]
pub(crate) struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub(crate) fn new(n: usize) -> Self {
        Marks {
            stamp: vec![0; n],
            epoch: 1,
        }
    }

    pub(crate) fn clear(&mut self) {
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 1;
        } else {
            self.epoch += 1;
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, v: usize) {
        self.stamp[v] = self.epoch;
    }

    #[inline]
    pub(crate) fn get(&self, v: usize) -> bool {
        self.stamp[v] == self.epoch
    }
}
