/// Vertex-indexed map whose `clear` is O(1): each slot carries the epoch it
/// was written in, and bumping the epoch invalidates every slot at once.
#[derive(Debug, Clone)]
pub(crate) struct EpochMap<T> {
    stamps: Vec<u32>,
    values: Vec<T>,
    epoch: u32,
}

impl<T: Copy + Default> EpochMap<T> {
    pub fn new(len: usize) -> Self {
        EpochMap { stamps: vec![0; len], values: vec![T::default(); len], epoch: 1 }
    }

    pub fn grow(&mut self, len: usize) {
        if len > self.stamps.len() {
            self.stamps.resize(len, 0);
            self.values.resize(len, T::default());
        }
    }

    pub fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    #[inline]
    pub fn get(&self, key: usize) -> Option<T> {
        (self.stamps[key] == self.epoch).then(|| self.values[key])
    }

    #[inline]
    pub fn contains(&self, key: usize) -> bool {
        self.stamps[key] == self.epoch
    }

    #[inline]
    pub fn insert(&mut self, key: usize, value: T) {
        self.stamps[key] = self.epoch;
        self.values[key] = value;
    }
}
