/** Payload shapes mirroring the server's JSON serializations. */

export interface PartialRouteDoc {
  id: string;
  length: number;
  entry: string | null;
  exit: string | null;
}

export interface ElementaryRouteDoc {
  id: string;
  parts: string[];
}

export interface InfrastructureDoc {
  delimiters: string[];
  partial_routes: PartialRouteDoc[];
  elementary_routes: ElementaryRouteDoc[];
  conflicts: [string, string][];
}

export interface TrainDoc {
  id: string;
  length: number;
  initial: string[];
  final: string[];
}

export interface InstanceDoc {
  infrastructure: InfrastructureDoc;
  trains: TrainDoc[];
}

export interface StateDoc {
  occ: Record<string, string>;
  finished: string[];
  present: string[];
}

export interface VerdictDoc {
  status: "live" | "dead" | "unknown";
  steps: number;
  time_s: number;
  algorithm: number;
}

export interface LegalActionDoc {
  train: string;
  route: string;
}

export interface HistoryEntry {
  train: string;
  elementary_route: string;
}

export interface SnapshotDoc {
  id: string;
  state: StateDoc;
  legal_actions: LegalActionDoc[];
  verdict: VerdictDoc;
  history: HistoryEntry[];
}
