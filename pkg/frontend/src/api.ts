/** Typed client for the annotation service HTTP API. */

export interface SpanJson {
  start: number;
  end: number;
}

export interface UploadResponse {
  doc_id: string;
  fingerprint: string;
  already_known: boolean;
  prior_case_count: number;
  warnings: { code: string; message: string; source_offset: number | null }[];
}

export interface RenderedDocument {
  doc_id: string;
  fingerprint: string;
  html: string;
}

export interface IdentifierToken {
  value: string;
  formula_id: string;
  ordinal: number;
}

export interface TextMatchJson {
  type: "text";
  span_a: SpanJson;
  span_b: SpanJson;
  length: number;
}

export interface MathMatchJson {
  type: "math";
  token_pairs: [number, number][];
  length: number;
}

export type MatchJson = TextMatchJson | MathMatchJson;

export interface DetectResponse {
  algorithm: string;
  min_length: number;
  matches: MatchJson[];
}

export interface CaseJson {
  case_id: number;
  doc_a: string;
  doc_b: string;
  doc_a_fingerprint: string;
  doc_b_fingerprint: string;
  span_a: SpanJson;
  span_b: SpanJson;
  text_a: string;
  text_b: string;
  formulas_a: { id: string; mathml: string }[];
  formulas_b: { id: string; mathml: string }[];
  images_a: string[];
  images_b: string[];
  content_types: string[];
  obfuscation: string | null;
  created_at: string;
}

export interface RecordCaseRequest {
  selected_text_a?: string;
  selected_text_b?: string;
  hint_a?: number;
  hint_b?: number;
  span_a?: SpanJson;
  span_b?: SpanJson;
  content_types: string[];
  obfuscation?: string | null;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      detail = body.error ?? JSON.stringify(body);
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async uploadDocument(file: File, displayName?: string): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file);
    if (displayName) form.append("display_name", displayName);
    return unwrap(await this.fetchImpl(this.url("/documents"), { method: "POST", body: form }));
  }

  async rendered(docId: string): Promise<RenderedDocument> {
    return unwrap(await this.fetchImpl(this.url(`/documents/${docId}/rendered`)));
  }

  async identifiers(docId: string): Promise<IdentifierToken[]> {
    const body = await unwrap<{ identifiers: IdentifierToken[] }>(
      await this.fetchImpl(this.url(`/documents/${docId}/identifiers`)),
    );
    return body.identifiers;
  }

  async detect(a: string, b: string, algorithm: string, minLength: number): Promise<DetectResponse> {
    return unwrap(
      await this.fetchImpl(
        this.url(`/pairs/${a}/${b}/detect?algorithm=${algorithm}&min_length=${minLength}`),
      ),
    );
  }

  async recordCase(a: string, b: string, request: RecordCaseRequest): Promise<CaseJson> {
    return unwrap(
      await this.fetchImpl(this.url(`/pairs/${a}/${b}/cases`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      }),
    );
  }

  async deleteLast(a: string, b: string): Promise<number | null> {
    const body = await unwrap<{ deleted_case_id: number | null }>(
      await this.fetchImpl(this.url(`/pairs/${a}/${b}/cases/last`), { method: "DELETE" }),
    );
    return body.deleted_case_id;
  }

  async listCases(pair?: [string, string]): Promise<CaseJson[]> {
    const query = pair ? `?pair=${pair[0]},${pair[1]}` : "";
    return unwrap(await this.fetchImpl(this.url(`/cases${query}`)));
  }

  async exportJsonl(pair?: [string, string]): Promise<string> {
    const query = pair ? `?pair=${pair[0]},${pair[1]}` : "";
    const response = await this.fetchImpl(this.url(`/cases/export${query}`));
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
