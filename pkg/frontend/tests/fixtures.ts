// Mocked API payloads shaped exactly like the session service's responses.

import type {
  DatabaseSummary,
  HistoryEntryPayload,
  RecommendationSetPayload,
  SubmitResponse,
} from "../src/types.js";

export function fiveRecommendations(): RecommendationSetPayload {
  const mk = (nl: string, sql: string, score: number) => ({
    nl,
    sql,
    score,
    action_breakdown: { selection: score, grouping: 0, aggregation: 0 },
    query: {
      selections: [{ table: "order_items", column: "order_quantity", aggregate: "SUM" }],
      grouping: [] as [string, string][],
      source_tables: ["order_items"],
      join_edges: [] as [[string, string], [string, string]][],
      lossy: false,
    },
  });
  return {
    items: [
      mk("What is the total order quantity for each order date?", "SELECT 1", 9),
      mk("What is the order date and number of order id for each order date?", "SELECT 2", 6),
      mk("What are the order dates?", "SELECT 3", 5),
      mk("What are the order statuses?", "SELECT 4", 5),
      mk("What are the product details?", "SELECT 5", 4),
    ],
    flags: [],
  };
}

export function historyEntry(index = 0): HistoryEntryPayload {
  return {
    index,
    query: {
      selections: [
        { table: "products", column: "product_details", aggregate: null },
        { table: "order_items", column: "order_quantity", aggregate: "SUM" },
      ],
      grouping: [["products", "product_details"]],
      source_tables: ["order_items", "products"],
      join_edges: [
        [
          ["order_items", "product_id"],
          ["products", "product_id"],
        ],
      ],
      lossy: false,
    },
    nl_text: "What is the product details and total order quantity for each product details?",
    result: {
      columns: [
        ["product_details", "N"],
        ["sum_order_quantity", "Q"],
      ],
      rows: [
        ["Americano", 8],
        ["Dove Chocolate", 18],
        ["Latte", 3],
      ],
    },
    chart: {
      mark: "bar",
      encodings: { x: ["product_details", "N"], y: ["sum_order_quantity", "Q"] },
      data: [
        { product_details: "Americano", sum_order_quantity: 8 },
        { product_details: "Dove Chocolate", sum_order_quantity: 18 },
        { product_details: "Latte", sum_order_quantity: 3 },
      ],
    },
    explanation: {
      segments: [
        ["the system ", "plain"],
        ["retrieves ", "plain"],
        ["product details", "column_mention"],
        [" from ", "plain"],
        ["products", "table_mention"],
        [" and ", "plain"],
        ["retrieves ", "plain"],
        ["order quantity", "column_mention"],
        [" from ", "plain"],
        ["order items", "table_mention"],
        [", grouped by ", "plain"],
        ["product details", "column_mention"],
      ],
    },
    vega_lite: {
      $schema: "https://vega.github.io/schema/vega-lite/v5.json",
      mark: "bar",
      data: { values: [] },
      encoding: {},
    },
  };
}

export function submitResponse(index = 0): SubmitResponse {
  return { entry: historyEntry(index), recommendations: fiveRecommendations() };
}

export function catalogSummary(): DatabaseSummary {
  return {
    id: "toy",
    domain_label: "customers and orders",
    tables: [
      {
        name: "order_items",
        primary_key: "order_item_id",
        columns: [
          { name: "order_item_id", display_text: "order item id", value_kind: "numeric" },
          { name: "order_quantity", display_text: "order quantity", value_kind: "numeric" },
        ],
      },
      {
        name: "products",
        primary_key: "product_id",
        columns: [
          { name: "product_details", display_text: "product details", value_kind: "text" },
          { name: "product_price", display_text: "product price", value_kind: "numeric" },
        ],
      },
    ],
  };
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
