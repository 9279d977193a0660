use std::collections::HashMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An open ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Complex64,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn disjoint(&self, other: &Ball) -> bool {
        (self.center - other.center).norm() >= self.radius + other.radius
    }
}

/// Events on inside configurations built from products of disjoint balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Full,
    /// Exactly one point in each ball, and no other points.
    Product(Vec<Ball>),
    Union(Vec<Event>),
    Not(Box<Event>),
}

impl Event {
    pub fn contains(&self, points: &[Complex64]) -> bool {
        match self {
            Event::Full => true,
            Event::Product(balls) => {
                balls.len() == points.len()
                    && balls.iter().all(|b| points.iter().filter(|z| b.contains(**z)).count() == 1)
            }
            Event::Union(es) => es.iter().any(|e| e.contains(points)),
            Event::Not(e) => !e.contains(points),
        }
    }

    pub fn complement(self) -> Event {
        Event::Not(Box::new(self))
    }

    fn validate(&self) -> Result<()> {
        match self {
            Event::Full => Ok(()),
            Event::Product(balls) => {
                for (i, a) in balls.iter().enumerate() {
                    if !(a.radius > 0.0) {
                        return Err(Error::invalid("ball radius must be positive"));
                    }
                    if balls[i + 1..].iter().any(|b| !a.disjoint(b)) {
                        return Err(Error::invalid("product event needs disjoint balls"));
                    }
                }
                Ok(())
            }
            Event::Union(es) => es.iter().try_for_each(Event::validate),
            Event::Not(e) => e.validate(),
        }
    }

    fn collect_balls(&self, out: &mut Vec<Ball>) {
        match self {
            Event::Full => {}
            Event::Product(bs) => {
                for b in bs {
                    if !out.contains(b) {
                        out.push(*b);
                    }
                }
            }
            Event::Union(es) => es.iter().for_each(|e| e.collect_balls(out)),
            Event::Not(e) => e.collect_balls(out),
        }
    }
}

#[derive(Clone, Debug)]
enum Compiled {
    Full,
    Product(Vec<usize>),
    Union(Vec<Compiled>),
    Not(Box<Compiled>),
}

impl Compiled {
    fn new(e: &Event, balls: &[Ball]) -> Self {
        match e {
            Event::Full => Compiled::Full,
            Event::Product(bs) => {
                Compiled::Product(bs.iter().map(|b| balls.iter().position(|x| x == b).unwrap()).collect())
            }
            Event::Union(es) => Compiled::Union(es.iter().map(|e| Compiled::new(e, balls)).collect()),
            Event::Not(e) => Compiled::Not(Box::new(Compiled::new(e, balls))),
        }
    }

    fn eval(&self, counts: &[u8], m: usize) -> bool {
        match self {
            Compiled::Full => true,
            Compiled::Product(ix) => ix.len() == m && ix.iter().all(|&i| counts[i] == 1),
            Compiled::Union(cs) => cs.iter().any(|c| c.eval(counts, m)),
            Compiled::Not(c) => !c.eval(counts, m),
        }
    }
}

/// A list of events evaluated together. Membership depends only on how many
/// points fall in each distinct ball, so it is memoized on those counts.
#[derive(Clone, Debug)]
pub struct EventFamily {
    pub events: Vec<Event>,
    balls: Vec<Ball>,
    compiled: Vec<Compiled>,
    memo: HashMap<Vec<u8>, Vec<bool>>,
}

impl EventFamily {
    pub fn new(events: Vec<Event>) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::invalid("empty event family"));
        }
        events.iter().try_for_each(Event::validate)?;
        let mut balls = Vec::new();
        events.iter().for_each(|e| e.collect_balls(&mut balls));
        let compiled = events.iter().map(|e| Compiled::new(e, &balls)).collect();
        Ok(EventFamily { events, balls, compiled, memo: HashMap::new() })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Membership of `points` in every event.
    pub fn indicators(&mut self, points: &[Complex64]) -> &[bool] {
        let counts: Vec<u8> = self
            .balls
            .iter()
            .map(|b| points.iter().filter(|z| b.contains(**z)).count().min(2) as u8)
            .collect();
        let m = points.len();
        let compiled = &self.compiled;
        self.memo
            .entry(counts)
            .or_insert_with_key(|c| compiled.iter().map(|e| e.eval(c, m)).collect())
    }

    /// `count` events, each the union of a random half of the ball products
    /// formed from `m` distinct balls of `balls`.
    pub fn random_unions<R: Rng + ?Sized>(rng: &mut R, balls: &[Ball], m: usize, count: usize) -> Result<Self> {
        if m == 0 || m > balls.len() {
            return Err(Error::invalid("need between 1 and len(balls) balls per product"));
        }
        let tuples = combinations(balls.len(), m);
        let half = (tuples.len() / 2).max(1);
        let mut events = Vec::with_capacity(count);
        for _ in 0..count {
            let mut pick = tuples.clone();
            pick.shuffle(rng);
            pick.truncate(half);
            pick.sort();
            events.push(Event::Union(
                pick.into_iter().map(|t| Event::Product(t.into_iter().map(|i| balls[i]).collect())).collect(),
            ));
        }
        EventFamily::new(events)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Seven disjoint balls in a hexagonal pattern inside the disk of radius `r0`,
/// with centers and radii on the 1/100 grid.
pub fn hex_balls(r0: f64) -> Vec<Ball> {
    let grid = |x: f64| (x * 100.0).floor() / 100.0;
    let d = grid(0.63 * r0);
    let h = grid(d * 3f64.sqrt() / 2.0);
    let mut centers = vec![Complex64::new(0.0, 0.0), Complex64::new(d, 0.0), Complex64::new(-d, 0.0)];
    for sx in [0.5, -0.5] {
        for sy in [1.0, -1.0] {
            centers.push(Complex64::new(sx * d, sy * h));
        }
    }
    let mut min_gap = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            min_gap = min_gap.min((a - b).norm());
        }
    }
    let reach = r0 - centers.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let radius = grid((0.5 * min_gap).min(reach) * 0.99);
    centers.into_iter().map(|c| Ball::new(c, radius)).collect()
}
