/**
 * Request pacing: debounced refresh (slider drags fire at most one request
 * batch per 200ms) and stale-response dropping via a monotonically
 * increasing scenario version.
 */

export const MIN_REQUEST_SPACING_MS = 200;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number = MIN_REQUEST_SPACING_MS,
  timers: { set: typeof setTimeout; clear: typeof clearTimeout } = {
    set: setTimeout,
    clear: clearTimeout,
  },
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) {
      timers.clear(handle);
    }
    handle = timers.set(() => {
      handle = undefined;
      fn(...args);
    }, waitMs);
  };
}

/** Tags in-flight work with a version; anything but the latest is stale. */
export class VersionGate {
  private version = 0;

  next(): number {
    this.version += 1;
    return this.version;
  }

  isCurrent(version: number): boolean {
    return version === this.version;
  }
}
