//! A write-once table: concurrent callers may compute the same entry, but
//! the first value published is the one every caller sees.

use std::any::Any;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::finval::Val;

#[derive(Default)]
pub struct Memo {
    table: Mutex<HashMap<Val, Arc<dyn Any + Send + Sync>>>,
}

impl Memo {
    pub fn new() -> Memo {
        Memo::default()
    }

    pub fn get_or_publish<T, E>(&self, key: Val, compute: impl FnOnce() -> Result<T, E>) -> Result<Arc<T>, E>
    where
        T: Send + Sync + 'static,
    {
        if let Some(v) = self.lookup::<T>(&key) {
            return Ok(v);
        }
        let fresh: Arc<dyn Any + Send + Sync> = Arc::new(compute()?);
        let mut table = self.table.lock().unwrap();
        let stored = table.entry(key).or_insert(fresh).clone();
        Ok(stored.downcast::<T>().expect("memo entries keep their type"))
    }

    pub fn lookup<T: Send + Sync + 'static>(&self, key: &Val) -> Option<Arc<T>> {
        let table = self.table.lock().unwrap();
        table.get(key).map(|v| v.clone().downcast::<T>().expect("memo entries keep their type"))
    }

    pub fn len(&self) -> usize {
        self.table.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_publish_wins() {
        let memo = Memo::new();
        let key = Val::atom("k");
        let a = memo.get_or_publish::<u32, ()>(key.clone(), || Ok(1)).unwrap();
        let b = memo.get_or_publish::<u32, ()>(key, || Ok(2)).unwrap();
        assert_eq!((*a, *b), (1, 1));
    }

    #[test]
    fn concurrent_readers_agree() {
        let memo = Arc::new(Memo::new());
        let handles: Vec<_> = (0..8u32)
            .map(|i| {
                let memo = memo.clone();
                std::thread::spawn(move || *memo.get_or_publish::<u32, ()>(Val::atom("k"), || Ok(i)).unwrap())
            })
            .collect();
        let seen: Vec<u32> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn errors_are_not_published() {
        let memo = Memo::new();
        assert!(memo.get_or_publish::<u32, &str>(Val::atom("k"), || Err("no")).is_err());
        assert!(memo.is_empty());
    }
}
