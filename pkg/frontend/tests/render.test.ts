import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { render } from "../src/render.js";
import { SchemaError } from "../src/schema.js";

const FIG7 = fileURLToPath(new URL("./fixtures/fig7.csv", import.meta.url));
const CLI = fileURLToPath(new URL("../dist/cli.js", import.meta.url));

const work = mkdtempSync(join(tmpdir(), "bdris-figures-"));

describe("render", () => {
  it("renders fig7 as an SVG with 3 series x 11 points", async () => {
    const out = join(work, "fig7.svg");
    const result = await render({ csvPath: FIG7, xField: "fraction", outPath: out });
    expect(result.series).toHaveLength(3);
    expect(result.series.every((s) => s.points.length === 11)).toBe(true);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline /g) ?? []).length).toBe(3);
    // 33 data markers + 3 legend markers
    expect((svg.match(/<circle /g) ?? []).length).toBe(36);
    expect(svg).toContain("type1 nbar=4 (max 48)");
  });

  it("is deterministic across reruns", async () => {
    const a = join(work, "a.svg");
    const b = join(work, "b.svg");
    await render({ csvPath: FIG7, xField: "fraction", outPath: a });
    await render({ csvPath: FIG7, xField: "fraction", outPath: b });
    expect(readFileSync(a, "utf-8")).toBe(readFileSync(b, "utf-8"));
  });

  it("writes PNG bytes for .png outputs", async () => {
    const out = join(work, "fig7.png");
    await render({ csvPath: FIG7, xField: "fraction", outPath: out });
    const bytes = readFileSync(out);
    expect(bytes.subarray(1, 4).toString()).toBe("PNG");
  });

  it("export-points diffs clean against the input values", async () => {
    const out = join(work, "points.svg");
    const points = join(work, "points.csv");
    await render({
      csvPath: FIG7,
      xField: "fraction",
      outPath: out,
      exportPointsPath: points,
    });
    const inputRows = readFileSync(FIG7, "utf-8").trim().split("\n").slice(1);
    const inputPairs = new Set(
      inputRows.map((line) => {
        const c = line.split(",");
        return `${c[0]},${c[1]},${c[8]},${c[12]}`; // kind, nbar, fraction, nmse_mean
      }),
    );
    const exported = readFileSync(points, "utf-8").trim().split("\n").slice(1);
    expect(exported).toHaveLength(inputRows.length);
    for (const line of exported) {
      expect(inputPairs.has(line)).toBe(true);
    }
  });

  it("handles a single-record CSV", async () => {
    const text = readFileSync(FIG7, "utf-8").trim().split("\n");
    const single = join(work, "single.csv");
    writeFileSync(single, [text[0], text[1]].join("\n") + "\n");
    const out = join(work, "single.svg");
    const result = await render({ csvPath: single, xField: "fraction", outPath: out });
    expect(result.series).toHaveLength(1);
    expect(result.series[0].points).toHaveLength(1);
    expect(readFileSync(out, "utf-8")).toContain("<circle");
  });

  it("raises a schema error naming the missing column", async () => {
    const text = readFileSync(FIG7, "utf-8").trim().split("\n");
    const cols = text[0].split(",");
    const idx = cols.indexOf("nmse_mean");
    const broken = text
      .map((line) => {
        const cells = line.split(",");
        cells.splice(idx, 1);
        return cells.join(",");
      })
      .join("\n");
    const bad = join(work, "bad.csv");
    writeFileSync(bad, broken);
    await expect(
      render({ csvPath: bad, xField: "fraction", outPath: join(work, "x.svg") }),
    ).rejects.toThrowError(SchemaError);
  });
});

describe("render_figures CLI", () => {
  it("renders and reports the series/point counts", () => {
    const out = join(work, "cli.svg");
    const stdout = execFileSync(
      "node",
      [CLI, FIG7, "--x", "fraction", "--out", out],
      { encoding: "utf-8" },
    );
    expect(stdout).toContain("3 series, 33 points");
  });

  it("exits nonzero on schema errors", () => {
    const bad = join(work, "bad.csv");
    let code = 0;
    let stderr = "";
    try {
      execFileSync("node", [CLI, bad + ".missing", "--x", "fraction", "--out",
                            join(work, "y.svg")], { encoding: "utf-8" });
    } catch (err: any) {
      code = err.status;
      stderr = String(err.stderr);
    }
    expect(code).toBe(2);

    writeFileSync(bad, "impairment_type,nbar\ntype1,4\n");
    try {
      execFileSync("node", [CLI, bad, "--x", "fraction", "--out",
                            join(work, "z.svg")], { encoding: "utf-8" });
      code = 0;
    } catch (err: any) {
      code = err.status;
      stderr = String(err.stderr);
    }
    expect(code).toBe(2);
    expect(stderr).toContain("missing column");
  });
});
