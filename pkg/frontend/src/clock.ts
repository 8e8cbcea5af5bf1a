/** Injectable time source so countdowns are testable with a fake clock. */
export interface Clock {
  /** Milliseconds since an arbitrary origin. */
  now(): number;
  setInterval(fn: () => void, ms: number): number;
  clearInterval(id: number): void;
}

export const systemClock: Clock = {
  now: () => performance.now(),
  setInterval: (fn, ms) => setInterval(fn, ms) as unknown as number,
  clearInterval: (id) => clearInterval(id),
};

interface PendingInterval {
  id: number;
  fn: () => void;
  periodMs: number;
  nextDue: number;
}

/** Deterministic clock for tests: time moves only via advance(). */
export class ManualClock implements Clock {
  private t = 0;
  private nextId = 1;
  private intervals: PendingInterval[] = [];

  now(): number {
    return this.t;
  }

  setInterval(fn: () => void, ms: number): number {
    const id = this.nextId++;
    this.intervals.push({ id, fn, periodMs: ms, nextDue: this.t + ms });
    return id;
  }

  clearInterval(id: number): void {
    this.intervals = this.intervals.filter((p) => p.id !== id);
  }

  advance(ms: number): void {
    const target = this.t + ms;
    for (;;) {
      const due = this.intervals
        .filter((p) => p.nextDue <= target)
        .sort((a, b) => a.nextDue - b.nextDue)[0];
      if (!due) break;
      this.t = due.nextDue;
      due.nextDue += due.periodMs;
      due.fn();
    }
    this.t = target;
  }
}
