/** Exponential reconnect delays: base, 2x, 4x ... capped, reset on a
 * successful connection. */
export class ReconnectBackoff {
  private attempt = 0;

  constructor(
    private readonly baseMs = 500,
    private readonly capMs = 10_000,
  ) {}

  nextDelayMs(): number {
    const delay = Math.min(this.baseMs * 2 ** this.attempt, this.capMs);
    this.attempt += 1;
    return delay;
  }

  reset(): void {
    this.attempt = 0;
  }
}
