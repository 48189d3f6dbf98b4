import { describe, expect, it } from "vitest";

import { readoutAt, TraceGeometry } from "../src/plot.js";

const MARGINS = { left: 50, right: 10, top: 10, bottom: 30 };

function geometry(samples: number[], width = 1200, height = 420) {
    return new TraceGeometry(width, height, MARGINS, samples);
}

describe("TraceGeometry", () => {
    it("maps first and last sample onto the inner plot edges", () => {
        const g = geometry(new Array(1500).fill(0).map((_, i) => i));
        expect(g.sampleToX(0)).toBe(MARGINS.left);
        expect(g.sampleToX(1499)).toBeCloseTo(1200 - MARGINS.right, 8);
    });

    it("snaps pixels to the nearest sample", () => {
        const g = geometry([0, 1, 2, 3, 4]);
        const step = g.innerWidth / 4;
        expect(g.xToNearestSample(MARGINS.left)).toBe(0);
        expect(g.xToNearestSample(MARGINS.left + 0.4 * step)).toBe(0);
        expect(g.xToNearestSample(MARGINS.left + 0.6 * step)).toBe(1);
        expect(g.xToNearestSample(1200 - MARGINS.right)).toBe(4);
    });

    it("returns null outside the trace area", () => {
        const g = geometry([0, 1, 2]);
        expect(g.xToNearestSample(3)).toBeNull();
        expect(g.xToNearestSample(1198)).toBeNull();
    });

    it("keeps flat traces drawable", () => {
        const g = geometry([2, 2, 2]);
        expect(g.yMax).toBeGreaterThan(g.yMin);
        expect(g.valueToY(2)).toBeGreaterThan(MARGINS.top);
    });

    it("value mapping is monotone downward in screen space", () => {
        const g = geometry([-1, 0, 1]);
        expect(g.valueToY(1)).toBeLessThan(g.valueToY(-1));
    });
});

describe("readoutAt", () => {
    it("reports absolute sample, amplitude and time", () => {
        const segment = {
            c_index: 4000,
            start_index: 3500,
            samples: [5, 6, 7, 8, 9],
            clipped: false,
        };
        const g = geometry(segment.samples);
        const hit = readoutAt(segment, g, g.sampleToX(2), 2000);
        expect(hit).not.toBeNull();
        expect(hit!.local).toBe(2);
        expect(hit!.absolute).toBe(3502);
        expect(hit!.value).toBe(7);
        expect(hit!.timeMs).toBeCloseTo((3502 / 2000) * 1000, 6);
    });
});
