import { describe, expect, it } from "vitest";

import type { InstanceDoc, SnapshotDoc } from "../src/types";
import { buildViewModel } from "../src/viewmodel";
import junction from "./fixtures/junction.json";
import snapDead from "./fixtures/snap_dead.json";
import snapInitial from "./fixtures/snap_initial.json";
import snapAfterR2e from "./fixtures/snap_after_r2e.json";

const instance = junction as InstanceDoc;
const initial = snapInitial as SnapshotDoc;
const afterR2e = snapAfterR2e as SnapshotDoc;
const dead = snapDead as SnapshotDoc;

describe("buildViewModel", () => {
  it("shows a green banner on the fresh junction", () => {
    const vm = buildViewModel(instance, initial);
    expect(vm.banner.status).toBe("live");
    expect(vm.banner.cssClass).toContain("banner-live");
    expect(vm.undoEnabled).toBe(false);
  });

  it("marks exactly the legal routes as interactive", () => {
    const vm = buildViewModel(instance, initial);
    const clickable = vm.routes.filter((r) => r.actions.length > 0).map((r) => r.id);
    expect(clickable.sort()).toEqual(["r2e", "r6w"]);
  });

  it("colors occupied routes by their train", () => {
    const vm = buildViewModel(instance, initial);
    const r1e = vm.routes.find((r) => r.id === "r1e")!;
    const r7w = vm.routes.find((r) => r.id === "r7w")!;
    expect(r1e.occupiedBy).toBe("t1");
    expect(r7w.occupiedBy).toBe("t2");
    expect(r1e.color).not.toBeNull();
    expect(r1e.color).not.toBe(r7w.color);
    expect(vm.routes.find((r) => r.id === "r3e")!.color).toBeNull();
  });

  it("flags a live-to-dead flip against the previous snapshot", () => {
    const vm = buildViewModel(instance, dead, afterR2e);
    expect(vm.banner.status).toBe("dead");
    expect(vm.banner.flipped).toBe(true);
    expect(vm.banner.label).toContain("unavoidable");
  });

  it("does not flag a flip without a live predecessor", () => {
    const vm = buildViewModel(instance, dead, dead);
    expect(vm.banner.flipped).toBe(false);
  });

  it("renders history and enables undo after moves", () => {
    const vm = buildViewModel(instance, dead);
    expect(vm.history).toEqual(["t1 → r2e", "t1 → r6e"]);
    expect(vm.undoEnabled).toBe(true);
  });
});
