// Client-side game execution. Three modes:
//   server_authoritative - render state messages, send inputs, never
//       simulate locally;
//   client_single - run the environment locally from the assigned seed
//       and upload the trajectory per episode;
//   client_p2p - run locally with a rollback session, exchange input
//       bundles through the relay, cross-check confirmed checksums.
//
// Re-simulated rollback frames are never rendered: drawing happens once
// per tick from the post-advance frontier state.
import { checksumHex, parseEnvConfig, makeEnv, restore, snapshot, stateChecksum, } from "./core/index.js";
import { RollbackSession } from "./rollback.js";
export function buildRenderPayload(state) {
    const sprites = [];
    for (let r = 0; r < state.height; r++) {
        for (let c = 0; c < state.width; c++) {
            const staticObj = state.staticAt([r, c]);
            if (staticObj !== null) {
                sprites.push({ pos: [r, c], sprite_id: staticObj.kind.name,
                    orientation: 0, state: [...staticObj.state] });
            }
            const item = state.itemAt([r, c]);
            if (item !== null) {
                sprites.push({ pos: [r, c], sprite_id: item.kind.name,
                    orientation: 0, state: [...item.state] });
            }
        }
    }
    for (const agent of state.agents) {
        sprites.push({
            pos: [agent.pos[0], agent.pos[1]],
            sprite_id: "agent",
            orientation: agent.dir,
            variant: agent.agentId,
            ...(agent.inventory ? { carrying: agent.inventory.name } : {}),
        });
    }
    return { width: state.width, height: state.height, sprites };
}
function mapToObject(map) {
    const out = {};
    for (const [k, v] of map)
        out[String(k)] = v;
    return out;
}
// -- single player, local execution ------------------------------------------
export class ClientSingleDriver {
    assign;
    send;
    actions;
    onFrame;
    env;
    config;
    state;
    episode = 0;
    score = 0;
    done = false;
    rows = [];
    constructor(assign, send, actions, onFrame) {
        this.assign = assign;
        this.send = send;
        this.actions = actions;
        this.onFrame = onFrame;
        this.config = parseEnvConfig(assign.env_config);
        this.env = makeEnv(this.config);
        this.state = this.env.resetEpisode(BigInt(assign.seed), 0);
    }
    tick() {
        if (this.done)
            return true;
        const frame = this.state.tick;
        const actionMap = new Map();
        for (const agent of this.state.agents) {
            actionMap.set(agent.agentId, agent.agentId === this.assign.player_id
                ? this.actions.takeAction() : this.env.noop);
        }
        const result = this.env.step(this.state, actionMap);
        for (const value of result.rewards.values())
            this.score += value;
        this.rows.push({
            tick: frame,
            actions: mapToObject(actionMap),
            rewards: mapToObject(result.rewards),
            infos: mapToObject(result.infos),
            checksum: checksumHex(stateChecksum(this.state)),
        });
        this.onFrame?.({ state: this.state, episode: this.episode,
            frame: frame + 1, score: this.score });
        if (result.truncated || result.terminated) {
            this.send({ type: "trajectory_upload", episode: this.episode,
                records: this.rows });
            this.rows = [];
            this.episode += 1;
            if (this.episode >= this.assign.episodes) {
                this.done = true;
            }
            else {
                this.state = this.env.resetEpisode(BigInt(this.assign.seed), this.episode);
            }
        }
        return this.done;
    }
}
// -- peer to peer with rollback ------------------------------------------------
export class P2PDriver {
    assign;
    send;
    actions;
    onFrame;
    numPlayers;
    env;
    config;
    state;
    session;
    episode = 0;
    done = false;
    desynced = false;
    snaps = new Map();
    frameChecksums = new Map();
    frameRewards = new Map();
    scoreBase = 0;
    recorded = -1;
    futureBundles = new Map();
    // Completed episodes plus the latest timeline of the current one.
    get score() {
        let total = this.scoreBase;
        for (const value of this.frameRewards.values())
            total += value;
        return total;
    }
    constructor(assign, send, actions, onFrame, numPlayers = 2) {
        this.assign = assign;
        this.send = send;
        this.actions = actions;
        this.onFrame = onFrame;
        this.numPlayers = numPlayers;
        this.config = parseEnvConfig(assign.env_config);
        this.env = makeEnv(this.config);
        this.state = this.env.resetEpisode(BigInt(assign.seed), 0);
        this.session = this.newSession();
    }
    newSession() {
        return new RollbackSession(this.numPlayers, this.assign.player_id, this.env.noop, this.assign.max_prediction ?? 8);
    }
    receive(message) {
        const kind = message["type"];
        if (kind === "peer_bundle") {
            const episode = Number(message["episode"] ?? this.episode);
            if (episode > this.episode) {
                const held = this.futureBundles.get(episode) ?? [];
                held.push(message);
                this.futureBundles.set(episode, held);
                return;
            }
            if (episode < this.episode)
                return;
            this.session.onRemoteInput({
                playerId: Number(message["player_id"]),
                firstFrame: Number(message["first_frame"]),
                actions: message["actions"].map(Number),
            });
        }
        else if (kind === "session_flagged") {
            this.desynced = true;
            this.done = true;
        }
    }
    tick() {
        if (this.done)
            return true;
        const ticks = this.config.maxTicks;
        const frame = this.session.currentFrame;
        if (frame < ticks
            && this.session.entry(this.assign.player_id, frame) === undefined
            && !this.session.windowFull) {
            const action = this.actions.takeAction();
            this.session.addLocalInput(frame, action);
            this.send({
                type: "input_bundle",
                episode: this.episode,
                player_id: this.assign.player_id,
                first_frame: frame,
                actions: [action],
            });
        }
        try {
            if (this.session.currentFrame < ticks) {
                this.execute(this.session.advance());
            }
            else {
                this.execute(this.session.resimulatePending());
            }
            this.flushConfirmed();
        }
        catch (err) {
            this.desynced = true;
            this.done = true;
            throw err;
        }
        this.onFrame?.({ state: this.state, episode: this.episode,
            frame: this.session.currentFrame, score: this.score });
        if (this.session.confirmedFrame >= ticks - 1) {
            this.uploadEpisode();
            this.episode += 1;
            if (this.episode >= this.assign.episodes) {
                this.done = true;
            }
            else {
                this.beginEpisode();
            }
        }
        return this.done;
    }
    beginEpisode() {
        this.state = this.env.resetEpisode(BigInt(this.assign.seed), this.episode);
        this.session = this.newSession();
        this.snaps.clear();
        this.frameChecksums.clear();
        this.frameRewards.clear();
        this.recorded = -1;
        for (const message of this.futureBundles.get(this.episode) ?? []) {
            this.receive(message);
        }
        this.futureBundles.delete(this.episode);
    }
    execute(commands) {
        for (const command of commands) {
            if (command.kind === "save") {
                this.snaps.set(command.frame, snapshot(this.state));
            }
            else if (command.kind === "load") {
                this.state = restore(this.snaps.get(command.frame));
            }
            else if (command.kind === "advance") {
                const result = this.env.step(this.state, command.actions);
                this.frameChecksums.set(command.frame, stateChecksum(this.state));
                let total = 0;
                for (const value of result.rewards.values())
                    total += value;
                this.frameRewards.set(command.frame, total);
            }
        }
    }
    flushConfirmed() {
        while (this.recorded < this.session.confirmedFrame) {
            const frame = this.recorded + 1;
            const checksum = this.frameChecksums.get(frame);
            this.session.recordLocalChecksum(frame, checksum);
            this.send({
                type: "checksum",
                episode: this.episode,
                frame,
                value: checksumHex(checksum),
            });
            this.recorded = frame;
        }
    }
    uploadEpisode() {
        // Replay the episode with the confirmed inputs to produce the reward
        // and info streams the server verifies against the checksums.
        const state = this.env.resetEpisode(BigInt(this.assign.seed), this.episode);
        const rows = [];
        let episodeScore = 0;
        for (let frame = 0; frame < this.config.maxTicks; frame++) {
            const actions = new Map();
            for (let player = 0; player < this.numPlayers; player++) {
                actions.set(player, this.session.entry(player, frame).action);
            }
            const result = this.env.step(state, actions);
            for (const value of result.rewards.values())
                episodeScore += value;
            rows.push({
                tick: frame,
                actions: mapToObject(actions),
                rewards: mapToObject(result.rewards),
                infos: mapToObject(result.infos),
                checksum: checksumHex(stateChecksum(state)),
            });
        }
        this.scoreBase += episodeScore;
        this.frameRewards.clear();
        this.send({ type: "trajectory_upload", episode: this.episode,
            records: rows });
    }
}
