/** Affine map from a data interval onto a pixel interval. */
export interface LinearScale {
  domainMin: number;
  domainMax: number;
  rangeMin: number;
  rangeMax: number;
  /** Maps a data value to its pixel coordinate. */
  map(value: number): number;
}

export function makeScale(
  domainMin: number,
  domainMax: number,
  rangeMin: number,
  rangeMax: number
): LinearScale {
  const slope = (rangeMax - rangeMin) / (domainMax - domainMin);
  return {
    domainMin,
    domainMax,
    rangeMin,
    rangeMax,
    map: (value: number) => rangeMin + (value - domainMin) * slope,
  };
}

/** Drops binary floating-point noise such as 0.30000000000000004. */
function clean(value: number): number {
  return Number(value.toPrecision(12));
}

/**
 * Widens a data interval by a fixed 5 % margin so markers never sit on
 * the plot frame.  A degenerate interval (all samples equal, e.g. an
 * identically zero magnetization trace) is widened to a unit-scale band
 * around the value so it still renders as a visible flat line.
 */
export function padRange(min: number, max: number): [number, number] {
  if (min === max) {
    const pad = 0.5 * Math.max(Math.abs(min), 1);
    return [min - pad, max + pad];
  }
  const pad = 0.05 * (max - min);
  return [min - pad, max + pad];
}

/**
 * Chooses round tick positions (1, 2 or 5 times a power of ten)
 * covering `[min, max]` with roughly `target` intervals.
 */
export function niceTicks(min: number, max: number, target = 6): number[] {
  if (!(max > min)) {
    throw new Error(`tick range [${min}, ${max}] is not increasing`);
  }
  const rawStep = (max - min) / target;
  const magnitude = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const normalized = rawStep / magnitude;
  let step: number;
  if (normalized < 1.5) {
    step = magnitude;
  } else if (normalized < 3.5) {
    step = 2 * magnitude;
  } else if (normalized < 7.5) {
    step = 5 * magnitude;
  } else {
    step = 10 * magnitude;
  }
  const ticks: number[] = [];
  const first = Math.ceil(min / step - 1e-9);
  const last = Math.floor(max / step + 1e-9);
  for (let k = first; k <= last; k++) {
    ticks.push(clean(k * step));
  }
  return ticks;
}

/**
 * Formats a tick value compactly: plain decimal notation in
 * [1e-3, 1e4), exponent notation ("2e6") outside it, "0" for zero.
 */
export function formatTick(value: number): string {
  if (value === 0) {
    return "0";
  }
  const cleaned = clean(value);
  const magnitude = Math.abs(cleaned);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return cleaned.toExponential().replace("e+", "e");
  }
  return cleaned.toString();
}
