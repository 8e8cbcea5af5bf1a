import type { Clock } from "./clock.js";

const TICK_MS = 100;

export interface RewardTimerHooks {
  /** Remaining whole seconds, for the visible countdown. */
  onTick?: (remainingS: number) => void;
  /** Fired exactly once when the cap is reached. */
  onFinish: () => void;
}

/**
 * Hard-stop countdown for the reward screen: playback never exceeds the
 * duration cap the server reported, regardless of clip length.
 */
export class RewardTimer {
  private intervalId: number | null = null;
  private startedAt = 0;
  private capMs = 0;

  constructor(
    private readonly clock: Clock,
    private readonly hooks: RewardTimerHooks,
  ) {}

  start(durationCapS: number): void {
    this.stop();
    this.capMs = durationCapS * 1000;
    this.startedAt = this.clock.now();
    this.hooks.onTick?.(Math.ceil(durationCapS));
    this.intervalId = this.clock.setInterval(() => this.tick(), TICK_MS);
  }

  get running(): boolean {
    return this.intervalId !== null;
  }

  elapsedS(): number {
    return (this.clock.now() - this.startedAt) / 1000;
  }

  stop(): void {
    if (this.intervalId !== null) {
      this.clock.clearInterval(this.intervalId);
      this.intervalId = null;
    }
  }

  private tick(): void {
    const remainingMs = this.capMs - (this.clock.now() - this.startedAt);
    if (remainingMs <= 0) {
      this.stop();
      this.hooks.onFinish();
      return;
    }
    this.hooks.onTick?.(Math.ceil(remainingMs / 1000));
  }
}
