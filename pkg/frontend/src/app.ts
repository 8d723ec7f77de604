/** Session controller: one session per tab, clicks disabled in flight. */

import { ApiClient, ApiError } from "./client";
import { render } from "./render";
import type { InstanceDoc, SnapshotDoc } from "./types";
import { buildViewModel } from "./viewmodel";

export class App {
  private instance: InstanceDoc | null = null;
  private snapshot: SnapshotDoc | null = null;
  private busy = false;

  constructor(
    private readonly client: ApiClient,
    private readonly root: HTMLElement,
    private readonly errorBox: HTMLElement,
  ) {}

  async loadInstance(instanceJson: string): Promise<void> {
    this.errorBox.textContent = "";
    try {
      this.instance = JSON.parse(instanceJson) as InstanceDoc;
    } catch (exc) {
      this.errorBox.textContent = `not valid JSON: ${exc}`;
      return;
    }
    await this.guarded(async () => {
      this.snapshot = await this.client.createSession(instanceJson);
      this.redraw();
    });
  }

  async allocate(train: string, elementaryRoute: string): Promise<void> {
    if (!this.snapshot) return;
    const previous = this.snapshot;
    await this.guarded(async () => {
      this.snapshot = await this.client.applyAction(previous.id, train, elementaryRoute);
      this.redraw(previous);
    });
  }

  async undo(): Promise<void> {
    if (!this.snapshot) return;
    const id = this.snapshot.id;
    await this.guarded(async () => {
      this.snapshot = await this.client.undo(id);
      this.redraw();
    });
  }

  private async guarded(op: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.root.classList.add("busy");
    try {
      await op();
    } catch (exc) {
      this.errorBox.textContent = exc instanceof ApiError ? exc.message : String(exc);
    } finally {
      this.busy = false;
      this.root.classList.remove("busy");
    }
  }

  private redraw(previous?: SnapshotDoc): void {
    if (!this.instance || !this.snapshot) return;
    render(this.root, buildViewModel(this.instance, this.snapshot, previous), {
      onAllocate: (train, route) => void this.allocate(train, route),
      onUndo: () => void this.undo(),
    });
  }
}
