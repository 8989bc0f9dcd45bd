// Payload shapes of the session-service HTTP API (see ../docs/formats.md).

export interface ColumnSummary {
  name: string;
  display_text: string;
  value_kind: "numeric" | "text" | "datetime" | "boolean";
}

export interface TableSummary {
  name: string;
  primary_key: string | null;
  columns: ColumnSummary[];
}

export interface DatabaseSummary {
  id: string;
  domain_label: string;
  tables: TableSummary[];
}

export interface QueryIRPayload {
  selections: { table: string; column: string; aggregate: string | null }[];
  grouping: [string, string][];
  source_tables: string[];
  join_edges: [[string, string], [string, string]][];
  lossy: boolean;
}

export interface RecommendationPayload {
  sql: string;
  nl: string;
  score: number;
  action_breakdown: Record<string, number>;
  query: QueryIRPayload;
}

export interface RecommendationSetPayload {
  items: RecommendationPayload[];
  flags: string[];
}

export interface ResultTablePayload {
  columns: [string, "Q" | "N" | "T" | null][];
  rows: unknown[][];
}

export interface ChartSpecPayload {
  mark: "bar" | "line" | "scatter" | "heatmap" | "histogram" | "value_card" | "table";
  encodings: Record<string, [string, string]>;
  data: Record<string, unknown>[];
}

export type ExplanationSegment = [
  text: string,
  kind: "plain" | "table_mention" | "column_mention",
];

export interface HistoryEntryPayload {
  index: number;
  query: QueryIRPayload;
  nl_text: string;
  result: ResultTablePayload;
  chart: ChartSpecPayload;
  explanation: { segments: ExplanationSegment[] };
  vega_lite?: Record<string, unknown>;
}

export interface CreateSessionResponse {
  session_id: string;
  database_id: string;
  created_at: number;
  recommendations: RecommendationSetPayload;
}

export interface SubmitResponse {
  entry: HistoryEntryPayload;
  recommendations: RecommendationSetPayload;
}

export interface DashboardCellPayload {
  history_index: number;
  row: number;
  col: number;
  width: number;
  height: number;
}

export interface DashboardPayload {
  id: string;
  session_id: string;
  cells: DashboardCellPayload[];
}

export interface ApiErrorPayload {
  error_code: string;
  message: string;
  position?: number;
}
