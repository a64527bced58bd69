// Canvas renderer: one sprite per payload entry, triangles for agents
// rotated by facing, geometric tiles for everything else, score and
// time-left in a HUD block. Unknown sprite ids draw a placeholder and
// warn once rather than breaking the frame.

export interface SpriteEntry {
  pos: [number, number];
  sprite_id: string;
  orientation: number;
  state?: number[];
  variant?: number;
  carrying?: string;
}

export interface RenderPayload {
  width: number;
  height: number;
  sprites: SpriteEntry[];
}

export interface Hud {
  score: number;
  time_left: number;
}

// The subset of CanvasRenderingContext2D the renderer touches; tests
// substitute a recording implementation.
export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
  save(): void;
  restore(): void;
  translate(x: number, y: number): void;
  rotate(angle: number): void;
}

const TILE_COLORS: Record<string, string> = {
  wall: "#555a63",
  counter: "#b7a27a",
  delivery_zone: "#3dbb58",
  rubble: "#8a6642",
};

const ITEM_COLORS: Record<string, string> = {
  onion: "#e9c229",
  plate: "#f2f2f2",
  onion_soup: "#e07b28",
  pickaxe: "#9aa2ad",
  key: "#ddb52f",
  med_kit: "#d93a3a",
};

const VICTIM_COLORS: Record<string, string> = {
  victim_green: "#3dbb58",
  victim_yellow: "#e9c229",
  victim_red: "#d93a3a",
};

const AGENT_COLORS = ["#3b7bd9", "#d9703b", "#8a4fd0", "#2fa88c"];

export class GridRenderer {
  readonly cell: number;
  private warned = new Set<string>();
  lastHud: Hud | null = null;
  spritesDrawn = 0;

  constructor(private ctx: Draw2D, cellSize = 48,
              private hudScore?: { textContent: string | null },
              private hudTime?: { textContent: string | null }) {
    this.cell = cellSize;
  }

  renderFrame(payload: RenderPayload, hud: Hud | null): void {
    const c = this.cell;
    this.ctx.fillStyle = "#20242b";
    this.ctx.fillRect(0, 0, payload.width * c, payload.height * c);
    this.ctx.strokeStyle = "#2d333d";
    this.ctx.lineWidth = 1;
    for (let r = 0; r < payload.height; r++) {
      for (let col = 0; col < payload.width; col++) {
        this.ctx.strokeRect(col * c, r * c, c, c);
      }
    }
    this.spritesDrawn = 0;
    for (const sprite of payload.sprites) {
      this.drawSprite(sprite);
      this.spritesDrawn += 1;
    }
    if (hud) {
      this.lastHud = hud;
      if (this.hudScore) this.hudScore.textContent = `Score ${hud.score}`;
      if (this.hudTime) this.hudTime.textContent = `Time ${hud.time_left}s`;
    }
  }

  private drawSprite(sprite: SpriteEntry): void {
    const c = this.cell;
    const [row, col] = sprite.pos;
    const x = col * c;
    const y = row * c;
    const id = sprite.sprite_id;
    const ctx = this.ctx;

    if (id === "agent") {
      // Triangle pointing along the facing; theta = pi/2 * direction.
      ctx.save();
      ctx.translate(x + c / 2, y + c / 2);
      ctx.rotate((Math.PI / 2) * sprite.orientation);
      ctx.fillStyle = AGENT_COLORS[(sprite.variant ?? 0) % AGENT_COLORS.length];
      ctx.beginPath();
      ctx.moveTo(c * 0.38, 0);
      ctx.lineTo(-c * 0.3, c * 0.3);
      ctx.lineTo(-c * 0.3, -c * 0.3);
      ctx.closePath();
      ctx.fill();
      if (sprite.carrying) {
        ctx.fillStyle = ITEM_COLORS[sprite.carrying] ?? "#ff4fd8";
        ctx.beginPath();
        ctx.arc(c * 0.22, 0, c * 0.14, 0, Math.PI * 2);
        ctx.fill();
      }
      ctx.restore();
      return;
    }

    if (id in TILE_COLORS) {
      ctx.fillStyle = TILE_COLORS[id];
      ctx.fillRect(x + 1, y + 1, c - 2, c - 2);
      return;
    }
    if (id in VICTIM_COLORS) {
      ctx.fillStyle = VICTIM_COLORS[id];
      ctx.beginPath();
      ctx.arc(x + c / 2, y + c / 2, c * 0.32, 0, Math.PI * 2);
      ctx.fill();
      return;
    }
    if (id in ITEM_COLORS) {
      ctx.fillStyle = ITEM_COLORS[id];
      ctx.beginPath();
      ctx.arc(x + c / 2, y + c / 2, c * 0.2, 0, Math.PI * 2);
      ctx.fill();
      return;
    }

    switch (id) {
      case "pot": {
        ctx.fillStyle = "#757d89";
        ctx.beginPath();
        ctx.arc(x + c / 2, y + c / 2, c * 0.34, 0, Math.PI * 2);
        ctx.fill();
        const [onions, timer, status] = sprite.state ?? [0, 0, 0];
        ctx.fillStyle = status === 2 ? "#3dbb58" : "#ffffff";
        ctx.font = `${Math.floor(c * 0.3)}px sans-serif`;
        ctx.textAlign = "center";
        const badge = status === 1 ? `${timer}` : status === 2 ? "OK" : `${onions}`;
        ctx.fillText(badge, x + c / 2, y + c * 0.62);
        return;
      }
      case "onion_stack":
      case "plate_stack": {
        ctx.fillStyle = id === "onion_stack" ? "#e9c229" : "#f2f2f2";
        for (const [dx, dy] of [[0.32, 0.6], [0.68, 0.6], [0.5, 0.34]]) {
          ctx.beginPath();
          ctx.arc(x + c * dx, y + c * dy, c * 0.15, 0, Math.PI * 2);
          ctx.fill();
        }
        return;
      }
      case "door": {
        const open = (sprite.state ?? [0])[0] === 1;
        ctx.strokeStyle = "#4f8ad9";
        ctx.lineWidth = 3;
        ctx.strokeRect(x + 3, y + 3, c - 6, c - 6);
        if (!open) {
          ctx.fillStyle = "#4f8ad9";
          ctx.fillRect(x + 3, y + 3, c - 6, c - 6);
        }
        return;
      }
      default: {
        if (!this.warned.has(id)) {
          this.warned.add(id);
          console.warn(`unknown sprite id ${JSON.stringify(id)}; drawing placeholder`);
        }
        ctx.fillStyle = "#ff4fd8";
        ctx.fillRect(x + c * 0.25, y + c * 0.25, c * 0.5, c * 0.5);
      }
    }
  }
}
